#include "ops.hpp"

#include <cmath>
#include <limits>

namespace modsat::dsl::ops {

namespace {

bool int_like(Type t) { return t == Type::Int || t == Type::Bool; }

double checked_real(double x, SourcePos pos) {
  if (std::isnan(x)) fault(FaultKind::Domain, "arithmetic produced NaN", pos);
  if (std::isinf(x)) fault(FaultKind::Overflow, "real arithmetic overflowed", pos);
  return x;
}

Value checked_int(bool overflowed, std::int64_t r, SourcePos pos) {
  if (overflowed) fault(FaultKind::Overflow, "integer arithmetic overflowed", pos);
  return Value::of_int(r);
}

} // namespace

void fault(FaultKind kind, const std::string& what, SourcePos pos) {
  throw RuntimeFault(kind,
                     std::string(fault_name(kind)) + " at " + std::to_string(pos.line) + ":" + std::to_string(pos.col) +
                         ": " + what,
                     pos);
}

Value convert(const Value& v, Type to, SourcePos pos) {
  if (v.type == to) return v;
  switch (to) {
  case Type::Int:
    if (v.type == Type::Real) {
      const double t = std::trunc(v.r);
      if (!std::isfinite(t) || t < -9.223372036854775808e18 || t >= 9.223372036854775808e18)
        fault(FaultKind::Domain, "real value does not fit an int", pos);
      return Value::of_int(static_cast<std::int64_t>(t));
    }
    return Value::of_int(v.as_int());
  case Type::Real: return Value::of_real(v.as_real());
  case Type::Bool: return Value::of_bool(v.truthy());
  case Type::Void: break;
  }
  return v;
}

Value unary(UnOp op, const Value& a, SourcePos pos) {
  if (op == UnOp::Not) return Value::of_bool(!a.truthy());
  if (a.type == Type::Real) return Value::of_real(-a.r);
  const std::int64_t x = a.as_int();
  if (x == std::numeric_limits<std::int64_t>::min()) fault(FaultKind::Overflow, "integer negation overflowed", pos);
  return Value::of_int(-x);
}

Value binary(BinOp op, const Value& a, const Value& b, SourcePos pos) {
  const bool ints = int_like(a.type) && int_like(b.type);
  switch (op) {
  case BinOp::And: return Value::of_bool(a.truthy() && b.truthy());
  case BinOp::Or: return Value::of_bool(a.truthy() || b.truthy());
  case BinOp::Eq:
  case BinOp::Ne: {
    bool eq;
    if (a.type == Type::Bool && b.type == Type::Bool) eq = a.b == b.b;
    else if (ints) eq = a.as_int() == b.as_int();
    else eq = a.as_real() == b.as_real();
    return Value::of_bool(op == BinOp::Eq ? eq : !eq);
  }
  case BinOp::Lt:
  case BinOp::Le:
  case BinOp::Gt:
  case BinOp::Ge: {
    int cmp;
    if (ints) {
      const auto x = a.as_int(), y = b.as_int();
      cmp = x < y ? -1 : (x > y ? 1 : 0);
    } else {
      const double x = a.as_real(), y = b.as_real();
      cmp = x < y ? -1 : (x > y ? 1 : 0);
    }
    switch (op) {
    case BinOp::Lt: return Value::of_bool(cmp < 0);
    case BinOp::Le: return Value::of_bool(cmp <= 0);
    case BinOp::Gt: return Value::of_bool(cmp > 0);
    default: return Value::of_bool(cmp >= 0);
    }
  }
  default: break;
  }

  if (ints) {
    const std::int64_t x = a.as_int(), y = b.as_int();
    std::int64_t r = 0;
    switch (op) {
    case BinOp::Add: {
      const bool o = __builtin_add_overflow(x, y, &r);
      return checked_int(o, r, pos);
    }
    case BinOp::Sub: {
      const bool o = __builtin_sub_overflow(x, y, &r);
      return checked_int(o, r, pos);
    }
    case BinOp::Mul: {
      const bool o = __builtin_mul_overflow(x, y, &r);
      return checked_int(o, r, pos);
    }
    case BinOp::Div:
    case BinOp::Mod:
      if (y == 0) fault(FaultKind::DivisionByZero, op == BinOp::Div ? "integer division by zero" : "modulo by zero", pos);
      if (x == std::numeric_limits<std::int64_t>::min() && y == -1)
        fault(FaultKind::Overflow, "integer division overflowed", pos);
      return Value::of_int(op == BinOp::Div ? x / y : x % y);
    default: break;
    }
  }
  const double x = a.as_real(), y = b.as_real();
  switch (op) {
  case BinOp::Add: return Value::of_real(checked_real(x + y, pos));
  case BinOp::Sub: return Value::of_real(checked_real(x - y, pos));
  case BinOp::Mul: return Value::of_real(checked_real(x * y, pos));
  case BinOp::Div:
    if (y == 0.0) fault(FaultKind::DivisionByZero, "real division by zero", pos);
    return Value::of_real(checked_real(x / y, pos));
  default: break;
  }
  fault(FaultKind::Domain, "operator '" + std::string(binop_text(op)) + "' applied to non-integer operands", pos);
}

bool is_math(BuiltinId id) {
  switch (id) {
  case BuiltinId::Min:
  case BuiltinId::Max:
  case BuiltinId::Abs:
  case BuiltinId::Floor:
  case BuiltinId::Ceil:
  case BuiltinId::Sqrt:
  case BuiltinId::Log:
  case BuiltinId::Exp: return true;
  default: return false;
  }
}

Value math(BuiltinId id, std::span<const Value> args, SourcePos pos) {
  switch (id) {
  case BuiltinId::Min:
  case BuiltinId::Max: {
    const Value& a = args[0];
    const Value& b = args[1];
    const bool want_min = id == BuiltinId::Min;
    if (int_like(a.type) && int_like(b.type)) {
      const auto x = a.as_int(), y = b.as_int();
      return Value::of_int(want_min ? std::min(x, y) : std::max(x, y));
    }
    const double x = a.as_real(), y = b.as_real();
    if (x == y) {
      // Order-independent choice between +0.0 and -0.0.
      const bool pick_x = want_min ? std::signbit(x) : !std::signbit(x);
      return Value::of_real(pick_x ? x : y);
    }
    return Value::of_real(want_min ? std::min(x, y) : std::max(x, y));
  }
  case BuiltinId::Abs:
    if (int_like(args[0].type)) {
      const auto x = args[0].as_int();
      if (x == std::numeric_limits<std::int64_t>::min()) fault(FaultKind::Overflow, "abs overflowed", pos);
      return Value::of_int(x < 0 ? -x : x);
    }
    return Value::of_real(std::fabs(args[0].r));
  case BuiltinId::Floor: return Value::of_real(std::floor(args[0].as_real()));
  case BuiltinId::Ceil: return Value::of_real(std::ceil(args[0].as_real()));
  case BuiltinId::Sqrt: {
    const double x = args[0].as_real();
    if (x < 0.0) fault(FaultKind::Domain, "sqrt of a negative value", pos);
    return Value::of_real(std::sqrt(x));
  }
  case BuiltinId::Log: {
    const double x = args[0].as_real();
    if (x <= 0.0) fault(FaultKind::Domain, "log of a non-positive value", pos);
    return Value::of_real(std::log(x));
  }
  case BuiltinId::Exp: return Value::of_real(checked_real(std::exp(args[0].as_real()), pos));
  default: break;
  }
  fault(FaultKind::Domain, "not a math builtin", pos);
}

} // namespace modsat::dsl::ops
