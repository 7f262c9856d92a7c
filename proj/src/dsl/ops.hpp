#pragma once

#include <span>

#include "modsat/dsl/dsl.hpp"
#include "modsat/dsl/symbols.hpp"

// Value-level semantics shared by the interpreter and the constant folder.
namespace modsat::dsl::ops {

[[noreturn]] void fault(FaultKind kind, const std::string& what, SourcePos pos);

// Implicit and explicit conversions. Real to int truncates toward zero.
Value convert(const Value& v, Type to, SourcePos pos);

Value unary(UnOp op, const Value& a, SourcePos pos);

// Every operator except the short-circuit ones.
Value binary(BinOp op, const Value& a, const Value& b, SourcePos pos);

// min, max, abs, floor, ceil, sqrt, log, exp.
Value math(BuiltinId id, std::span<const Value> args, SourcePos pos);

bool is_math(BuiltinId id);

} // namespace modsat::dsl::ops
