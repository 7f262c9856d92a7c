#pragma once

#include <cstdint>

#include "modsat/dsl/ast.hpp"

namespace modsat::dsl {

struct Value {
  Type type = Type::Void;
  std::int64_t i = 0;
  double r = 0.0;
  bool b = false;

  static Value of_int(std::int64_t x) { return {Type::Int, x, 0.0, false}; }
  static Value of_real(double x) { return {Type::Real, 0, x, false}; }
  static Value of_bool(bool x) { return {Type::Bool, 0, 0.0, x}; }
  static Value none() { return {}; }

  double as_real() const {
    switch (type) {
    case Type::Real: return r;
    case Type::Int: return static_cast<double>(i);
    case Type::Bool: return b ? 1.0 : 0.0;
    default: return 0.0;
    }
  }
  std::int64_t as_int() const { return type == Type::Bool ? (b ? 1 : 0) : i; }
  bool truthy() const {
    switch (type) {
    case Type::Bool: return b;
    case Type::Int: return i != 0;
    case Type::Real: return r != 0.0;
    default: return false;
    }
  }
};

} // namespace modsat::dsl
