#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "modsat/dsl/ast.hpp"
#include "modsat/dsl/value.hpp"
#include "modsat/solver_view.hpp"

namespace modsat::dsl {

// Bit set of slot classes allowed to write a field or call a builtin.
enum : std::uint8_t {
  kCondition = 1u << 0,
  kFunction = 1u << 1,
  kVarBump = 1u << 2,
  kClaBump = 1u << 3,
  kAllClasses = kCondition | kFunction | kVarBump | kClaBump,
};

std::uint8_t class_bit(SlotClass c);

enum class IndexSpace : std::uint8_t { None, Vars, Learnts };

struct FieldInfo {
  std::string_view name;
  Type type;
  IndexSpace index;
  std::uint8_t writers; // 0 for read-only
  Value (*get)(const SolverView&, std::int64_t);
  void (*set)(SolverView&, std::int64_t, const Value&);
};

std::span<const FieldInfo> fields();
int find_field(std::string_view name);

struct ConstantInfo {
  std::string_view name;
  std::int64_t value;
};

std::span<const ConstantInfo> constants();
int find_constant(std::string_view name);

enum class BuiltinId : std::uint8_t {
  Min,
  Max,
  Abs,
  Floor,
  Ceil,
  Sqrt,
  Log,
  Exp,
  Rand01,
  ProgressEstimate,
  HeapTop,
  InHeap,
  CancelUntil,
  ReduceDb,
  RebuildOrderHeap,
  ClearLbdQueue,
  HeapUpdate,
  HeapInsert,
};

struct BuiltinInfo {
  std::string_view name;
  BuiltinId id;
  int arity;
  std::uint8_t callers; // slot classes allowed to call it
  bool impure;          // consumes randomness or mutates solver state
};

std::span<const BuiltinInfo> builtins();
int find_builtin(std::string_view name);

} // namespace modsat::dsl
