#include "ops.hpp"

namespace modsat::dsl {

std::string_view fault_name(FaultKind k) {
  switch (k) {
  case FaultKind::DivisionByZero: return "division-by-zero";
  case FaultKind::StepBudget: return "step-budget";
  case FaultKind::Domain: return "domain";
  case FaultKind::IndexRange: return "index-range";
  case FaultKind::Overflow: return "overflow";
  }
  return "?";
}

std::uint64_t step_budget(const SolverView& view) {
  const auto vars = static_cast<std::uint64_t>(std::max<std::int64_t>(0, view.num_vars()));
  const auto learnts = static_cast<std::uint64_t>(std::max<std::int64_t>(0, view.learnts_size()));
  return 10 * vars + 10 * learnts + 10000;
}

namespace {

class Interpreter {
public:
  Interpreter(const Program& p, SolverView& view, std::uint64_t budget)
      : p_(p), view_(view), budget_(budget), locals_(static_cast<std::size_t>(p.num_locals)) {}

  Value run(std::span<const Value> args) {
    if (args.size() != p_.params.size())
      throw std::invalid_argument("hook expects " + std::to_string(p_.params.size()) + " argument(s)");
    for (std::size_t k = 0; k < args.size(); ++k) locals_[k] = ops::convert(args[k], p_.local_types[k], {});
    exec_list(p_.body);
    return result_;
  }

  std::uint64_t steps() const { return steps_; }

private:
  void tick(SourcePos pos) {
    if (++steps_ > budget_)
      ops::fault(FaultKind::StepBudget, "exceeded step budget of " + std::to_string(budget_), pos);
  }

  // Returns true once a return statement has executed.
  bool exec_list(const std::vector<StmtPtr>& list) {
    for (const auto& s : list)
      if (exec(*s)) return true;
    return false;
  }

  bool exec(const Stmt& s) {
    tick(s.pos);
    switch (s.kind) {
    case StmtKind::Block: return exec_list(s.body);
    case StmtKind::Decl: {
      const Type t = p_.local_types[s.local];
      locals_[s.local] = s.value ? ops::convert(eval(*s.value), t, s.pos) : zero(t);
      return false;
    }
    case StmtKind::Assign: assign(s); return false;
    case StmtKind::If:
      if (eval(*s.value).truthy()) return exec(*s.then_branch);
      if (s.else_branch) return exec(*s.else_branch);
      return false;
    case StmtKind::Return:
      if (s.value) result_ = eval(*s.value);
      return true;
    case StmtKind::ForEach:
      for (std::int64_t i = 0; i < bound(s.iter); ++i) {
        tick(s.pos);
        locals_[s.local] = Value::of_int(i);
        if (exec_list(s.body)) return true;
      }
      return false;
    case StmtKind::ExprStmt: eval(*s.value); return false;
    }
    return false;
  }

  std::int64_t bound(IterKind k) const { return k == IterKind::Vars ? view_.num_vars() : view_.learnts_size(); }

  static Value zero(Type t) {
    switch (t) {
    case Type::Bool: return Value::of_bool(false);
    case Type::Real: return Value::of_real(0.0);
    default: return Value::of_int(0);
    }
  }

  std::int64_t checked_index(const FieldInfo& info, const Value& idx, SourcePos pos) const {
    const std::int64_t i = idx.as_int();
    const std::int64_t n = info.index == IndexSpace::Vars ? view_.num_vars() : view_.learnts_size();
    if (i < 0 || i >= n)
      ops::fault(FaultKind::IndexRange,
                 std::string(info.name) + "[" + std::to_string(i) + "] outside 0.." + std::to_string(n - 1), pos);
    return i;
  }

  Var checked_var(const Value& v, SourcePos pos) const {
    const std::int64_t i = v.as_int();
    if (i < 0 || i >= view_.num_vars()) ops::fault(FaultKind::IndexRange, "variable " + std::to_string(i) + " out of range", pos);
    return static_cast<Var>(i);
  }

  void assign(const Stmt& s) {
    const Expr& t = *s.target;
    std::int64_t idx = 0;
    const FieldInfo* field = nullptr;
    if (t.binding.kind == BindingKind::Field || t.binding.kind == BindingKind::ArrayField) {
      field = &fields()[t.binding.index];
      if (t.binding.kind == BindingKind::ArrayField) idx = checked_index(*field, eval(*t.args[0]), t.pos);
    }
    const Type tt = field ? field->type : p_.local_types[t.binding.index];
    Value rhs = eval(*s.value);
    if (s.assign_op != AssignOp::Set) {
      const Value cur = field ? field->get(view_, idx) : locals_[t.binding.index];
      static constexpr BinOp kOps[] = {BinOp::Add, BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div};
      rhs = ops::binary(kOps[static_cast<int>(s.assign_op)], cur, rhs, s.pos);
    }
    const Value v = ops::convert(rhs, tt, s.pos);
    if (field) field->set(view_, idx, v);
    else locals_[t.binding.index] = v;
  }

  Value eval(const Expr& e) {
    switch (e.kind) {
    case ExprKind::IntLit: return Value::of_int(e.ival);
    case ExprKind::RealLit: return Value::of_real(e.rval);
    case ExprKind::BoolLit: return Value::of_bool(e.bval);
    case ExprKind::Name:
      switch (e.binding.kind) {
      case BindingKind::Local: return locals_[e.binding.index];
      case BindingKind::Field: return fields()[e.binding.index].get(view_, 0);
      case BindingKind::Constant: return Value::of_int(constants()[e.binding.index].value);
      default: break;
      }
      break;
    case ExprKind::Index: {
      const auto& info = fields()[e.binding.index];
      return info.get(view_, checked_index(info, eval(*e.args[0]), e.pos));
    }
    case ExprKind::Call: return call(e);
    case ExprKind::Cast: return ops::convert(eval(*e.args[0]), e.cast_to, e.pos);
    case ExprKind::Unary: return ops::unary(e.unop, eval(*e.args[0]), e.pos);
    case ExprKind::Binary:
      if (e.binop == BinOp::And) return Value::of_bool(eval(*e.args[0]).truthy() && eval(*e.args[1]).truthy());
      if (e.binop == BinOp::Or) return Value::of_bool(eval(*e.args[0]).truthy() || eval(*e.args[1]).truthy());
      {
        const Value a = eval(*e.args[0]);
        const Value b = eval(*e.args[1]);
        return ops::binary(e.binop, a, b, e.pos);
      }
    case ExprKind::Ternary: {
      const Value v = eval(*e.args[0]).truthy() ? eval(*e.args[1]) : eval(*e.args[2]);
      return ops::convert(v, e.type, e.pos);
    }
    }
    throw std::logic_error("interpreting an unchecked program");
  }

  Value call(const Expr& e) {
    const auto& info = builtins()[e.binding.index];
    std::vector<Value> args;
    args.reserve(e.args.size());
    for (const auto& a : e.args) args.push_back(eval(*a));
    if (ops::is_math(info.id)) return ops::math(info.id, args, e.pos);
    switch (info.id) {
    case BuiltinId::Rand01: return Value::of_real(view_.rand01());
    case BuiltinId::ProgressEstimate: return Value::of_real(view_.progress_estimate());
    case BuiltinId::HeapTop: return Value::of_int(view_.heap_top());
    case BuiltinId::InHeap: return Value::of_bool(view_.in_heap(checked_var(args[0], e.pos)));
    case BuiltinId::CancelUntil: {
      const std::int64_t level = ops::convert(args[0], Type::Int, e.pos).i;
      if (level < 0) ops::fault(FaultKind::Domain, "cancel_until to a negative level", e.pos);
      view_.cancel_until(level);
      return Value::none();
    }
    case BuiltinId::ReduceDb: view_.reduce_db(); return Value::none();
    case BuiltinId::RebuildOrderHeap: view_.rebuild_order_heap(); return Value::none();
    case BuiltinId::ClearLbdQueue: view_.clear_lbd_queue(); return Value::none();
    case BuiltinId::HeapUpdate: view_.heap_update(checked_var(args[0], e.pos)); return Value::none();
    case BuiltinId::HeapInsert: view_.heap_insert(checked_var(args[0], e.pos)); return Value::none();
    default: break;
    }
    throw std::logic_error("unhandled builtin");
  }

  const Program& p_;
  SolverView& view_;
  std::uint64_t budget_;
  std::uint64_t steps_ = 0;
  std::vector<Value> locals_;
  Value result_;
};

} // namespace

RunOutcome interpret(const Program& p, SolverView& view, std::span<const Value> args) {
  return interpret(p, view, args, step_budget(view));
}

RunOutcome interpret(const Program& p, SolverView& view, std::span<const Value> args, std::uint64_t budget) {
  if (!p.checked) throw std::logic_error("interpreting an unchecked program");
  Interpreter it(p, view, budget);
  try {
    Value r = it.run(args);
    view.account_steps(it.steps());
    return {r, it.steps()};
  } catch (const RuntimeFault&) {
    view.account_steps(it.steps());
    throw;
  }
}

} // namespace modsat::dsl
