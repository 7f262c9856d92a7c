#include <charconv>
#include <cmath>
#include <limits>

#include "ops.hpp"

namespace modsat::dsl {

namespace {

// --- rendering ---

int precedence(const Expr& e) {
  switch (e.kind) {
  case ExprKind::Ternary: return 1;
  case ExprKind::Binary:
    switch (e.binop) {
    case BinOp::Or: return 2;
    case BinOp::And: return 3;
    case BinOp::Eq:
    case BinOp::Ne: return 4;
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 5;
    case BinOp::Add:
    case BinOp::Sub: return 6;
    default: return 7;
    }
  case ExprKind::Unary: return 8;
  case ExprKind::IntLit: return e.ival < 0 ? 8 : 9;
  case ExprKind::RealLit: return e.rval < 0 || (e.rval == 0.0 && std::signbit(e.rval)) ? 8 : 9;
  default: return 9;
  }
}

std::string real_text(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, end);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

class Renderer {
public:
  std::string program(const Program& p) {
    if (!p.has_header) {
      for (const auto& s : p.body) stmt(*s, 0);
      return std::move(out_);
    }
    out_ += slot_return_type(p.slot) == Type::Bool ? "bool " : "void ";
    out_ += slot_name(p.slot);
    out_ += '(';
    for (std::size_t k = 0; k < p.params.size(); ++k) {
      if (k) out_ += ", ";
      out_ += type_name(p.params[k].type);
      out_ += ' ';
      out_ += p.params[k].name;
    }
    out_ += ") {\n";
    for (const auto& s : p.body) stmt(*s, 1);
    out_ += "}\n";
    return std::move(out_);
  }

  std::string expr_text(const Expr& e) {
    std::string saved = std::move(out_);
    out_.clear();
    expr(e);
    std::swap(saved, out_);
    return saved;
  }

private:
  void indent(int depth) { out_.append(static_cast<std::size_t>(depth) * 2, ' '); }

  void branch(const Stmt& s, int depth) {
    if (s.kind == StmtKind::Block) {
      for (const auto& b : s.body) stmt(*b, depth);
    } else {
      stmt(s, depth);
    }
  }

  void stmt(const Stmt& s, int depth) {
    indent(depth);
    switch (s.kind) {
    case StmtKind::Block:
      out_ += "{\n";
      for (const auto& b : s.body) stmt(*b, depth + 1);
      indent(depth);
      out_ += "}\n";
      return;
    case StmtKind::Decl:
      out_ += s.auto_type ? std::string_view("let") : type_name(s.decl_type);
      out_ += ' ';
      out_ += s.name;
      if (s.value) {
        out_ += " = ";
        expr(*s.value);
      }
      out_ += ";\n";
      return;
    case StmtKind::Assign: {
      static constexpr std::string_view kOps[] = {" = ", " += ", " -= ", " *= ", " /= "};
      expr(*s.target);
      out_ += kOps[static_cast<int>(s.assign_op)];
      expr(*s.value);
      out_ += ";\n";
      return;
    }
    case StmtKind::If:
      out_ += "if (";
      expr(*s.value);
      out_ += ") {\n";
      branch(*s.then_branch, depth + 1);
      if (s.else_branch) {
        indent(depth);
        out_ += "} else {\n";
        branch(*s.else_branch, depth + 1);
      }
      indent(depth);
      out_ += "}\n";
      return;
    case StmtKind::Return:
      out_ += "return";
      if (s.value) {
        out_ += ' ';
        expr(*s.value);
      }
      out_ += ";\n";
      return;
    case StmtKind::ForEach:
      out_ += s.iter == IterKind::Vars ? "for_each_var (" : "for_each_learnt (";
      out_ += s.name;
      out_ += ") {\n";
      if (s.body.size() == 1) {
        branch(*s.body.front(), depth + 1);
      } else {
        for (const auto& b : s.body) stmt(*b, depth + 1);
      }
      indent(depth);
      out_ += "}\n";
      return;
    case StmtKind::ExprStmt:
      expr(*s.value);
      out_ += ";\n";
      return;
    }
  }

  void operand(const Expr& e, bool parens) {
    if (parens) out_ += '(';
    expr(e);
    if (parens) out_ += ')';
  }

  void expr(const Expr& e) {
    switch (e.kind) {
    case ExprKind::IntLit: out_ += std::to_string(e.ival); return;
    case ExprKind::RealLit: out_ += real_text(e.rval); return;
    case ExprKind::BoolLit: out_ += e.bval ? "true" : "false"; return;
    case ExprKind::Name: out_ += e.name; return;
    case ExprKind::Index:
      out_ += e.name;
      out_ += '[';
      expr(*e.args[0]);
      out_ += ']';
      return;
    case ExprKind::Call:
      out_ += e.name;
      out_ += '(';
      for (std::size_t k = 0; k < e.args.size(); ++k) {
        if (k) out_ += ", ";
        expr(*e.args[k]);
      }
      out_ += ')';
      return;
    case ExprKind::Cast:
      out_ += type_name(e.cast_to);
      out_ += '(';
      expr(*e.args[0]);
      out_ += ')';
      return;
    case ExprKind::Unary: {
      out_ += e.unop == UnOp::Neg ? '-' : '!';
      const Expr& a = *e.args[0];
      // Keep "- -x" from lexing as a decrement.
      const bool parens = precedence(a) < 8 || (e.unop == UnOp::Neg && precedence(a) == 8);
      operand(a, parens);
      return;
    }
    case ExprKind::Binary: {
      const int prec = precedence(e);
      operand(*e.args[0], precedence(*e.args[0]) < prec);
      out_ += ' ';
      out_ += binop_text(e.binop);
      out_ += ' ';
      operand(*e.args[1], precedence(*e.args[1]) <= prec);
      return;
    }
    case ExprKind::Ternary:
      operand(*e.args[0], precedence(*e.args[0]) <= 1);
      out_ += " ? ";
      expr(*e.args[1]);
      out_ += " : ";
      expr(*e.args[2]);
      return;
    }
  }

  std::string out_;
};

// --- analyses ---

bool impure(const Expr& e) {
  if (e.kind == ExprKind::Call && e.binding.kind == BindingKind::Builtin && builtins()[e.binding.index].impure)
    return true;
  for (const auto& a : e.args)
    if (impure(*a)) return true;
  return false;
}

bool may_fault(const Expr& e) {
  switch (e.kind) {
  case ExprKind::Index: return true;
  case ExprKind::Binary:
    switch (e.binop) {
    case BinOp::Add:
    case BinOp::Sub:
    case BinOp::Mul:
    case BinOp::Div:
    case BinOp::Mod: return true;
    default: break;
    }
    break;
  case ExprKind::Unary:
    if (e.unop == UnOp::Neg && e.type == Type::Int) return true;
    break;
  case ExprKind::Cast:
    if (e.cast_to == Type::Int && e.args[0]->type == Type::Real) return true;
    break;
  case ExprKind::Call:
    if (e.binding.kind == BindingKind::Builtin) {
      switch (builtins()[e.binding.index].id) {
      case BuiltinId::Min:
      case BuiltinId::Max:
      case BuiltinId::Floor:
      case BuiltinId::Ceil:
      case BuiltinId::Rand01:
      case BuiltinId::ProgressEstimate:
      case BuiltinId::HeapTop: break;
      default: return true;
      }
    }
    break;
  default: break;
  }
  for (const auto& a : e.args)
    if (may_fault(*a)) return true;
  return false;
}

bool effectful(const Expr& e) { return impure(e) || may_fault(e); }

bool is_literal(const Expr& e) {
  return e.kind == ExprKind::IntLit || e.kind == ExprKind::RealLit || e.kind == ExprKind::BoolLit;
}

Value literal_value(const Expr& e) {
  switch (e.kind) {
  case ExprKind::IntLit: return Value::of_int(e.ival);
  case ExprKind::RealLit: return Value::of_real(e.rval);
  default: return Value::of_bool(e.bval);
  }
}

ExprPtr make_literal(const Value& v, SourcePos pos) {
  auto e = std::make_unique<Expr>();
  e->pos = pos;
  e->type = v.type;
  switch (v.type) {
  case Type::Int:
    e->kind = ExprKind::IntLit;
    e->ival = v.i;
    break;
  case Type::Real:
    e->kind = ExprKind::RealLit;
    e->rval = v.r;
    break;
  default:
    e->kind = ExprKind::BoolLit;
    e->bval = v.b;
    break;
  }
  return e;
}

// --- rewriting passes ---

class Canonicalizer {
public:
  explicit Canonicalizer(Program& p) : p_(p) {}

  void rename() {
    const int nparams = static_cast<int>(p_.params.size());
    names_.resize(static_cast<std::size_t>(p_.num_locals));
    for (int k = 0; k < p_.num_locals; ++k)
      names_[k] = k < nparams ? "p" + std::to_string(k) : "l" + std::to_string(k - nparams);
    for (int k = 0; k < nparams; ++k) p_.params[k].name = names_[k];
    for (auto& s : p_.body) rename(*s);
  }

  void desugar() { for_each_stmt(p_.body, [&](Stmt& s) { desugar(s); }); }

  void fold() {
    for_each_stmt(p_.body, [&](Stmt& s) {
      for (ExprPtr* e : {&s.target, &s.value})
        if (*e) fold(*e);
    });
  }

  void order() {
    for_each_stmt(p_.body, [&](Stmt& s) {
      for (ExprPtr* e : {&s.target, &s.value})
        if (*e) order(**e);
    });
  }

  void simplify() { simplify_list(p_.body); }

private:
  template <typename F>
  void for_each_stmt(std::vector<StmtPtr>& list, F&& f) {
    for (auto& s : list) visit(*s, f);
  }

  template <typename F>
  void visit(Stmt& s, F& f) {
    f(s);
    if (s.then_branch) visit(*s.then_branch, f);
    if (s.else_branch) visit(*s.else_branch, f);
    for (auto& b : s.body) visit(*b, f);
  }

  void rename(Stmt& s) {
    if ((s.kind == StmtKind::Decl || s.kind == StmtKind::ForEach) && s.local >= 0) s.name = names_[s.local];
    if (s.kind == StmtKind::Decl) s.auto_type = false;
    if (s.target) rename(*s.target);
    if (s.value) rename(*s.value);
    if (s.then_branch) rename(*s.then_branch);
    if (s.else_branch) rename(*s.else_branch);
    for (auto& b : s.body) rename(*b);
  }

  void rename(Expr& e) {
    if (e.kind == ExprKind::Name && e.binding.kind == BindingKind::Local) e.name = names_[e.binding.index];
    for (auto& a : e.args) rename(*a);
  }

  void desugar(Stmt& s) {
    if (s.kind != StmtKind::Assign || s.assign_op == AssignOp::Set) return;
    if (s.target->kind == ExprKind::Index && impure(*s.target->args[0])) return;
    static constexpr BinOp kOps[] = {BinOp::Add, BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div};
    auto bin = std::make_unique<Expr>();
    bin->kind = ExprKind::Binary;
    bin->pos = s.pos;
    bin->binop = kOps[static_cast<int>(s.assign_op)];
    const bool ints = s.target->type != Type::Real && s.value->type != Type::Real;
    bin->type = ints ? Type::Int : Type::Real;
    bin->args.push_back(clone(*s.target));
    bin->args.push_back(std::move(s.value));
    s.value = std::move(bin);
    s.assign_op = AssignOp::Set;
  }

  void fold(ExprPtr& e) {
    for (auto& a : e->args) fold(a);
    if (e->args.empty()) return;
    if (e->kind == ExprKind::Ternary) {
      if (!is_literal(*e->args[0])) return;
      ExprPtr& pick = e->args[0]->bval ? e->args[1] : e->args[2];
      if (pick->type == e->type) e = std::move(pick);
      return;
    }
    for (const auto& a : e->args)
      if (!is_literal(*a)) return;
    std::vector<Value> vals;
    for (const auto& a : e->args) vals.push_back(literal_value(*a));
    Value v;
    try {
      switch (e->kind) {
      case ExprKind::Unary: v = ops::unary(e->unop, vals[0], e->pos); break;
      case ExprKind::Binary: v = ops::binary(e->binop, vals[0], vals[1], e->pos); break;
      case ExprKind::Cast: v = ops::convert(vals[0], e->cast_to, e->pos); break;
      case ExprKind::Call:
        if (e->binding.kind != BindingKind::Builtin || !ops::is_math(builtins()[e->binding.index].id)) return;
        v = ops::math(builtins()[e->binding.index].id, vals, e->pos);
        break;
      default: return;
      }
    } catch (const RuntimeFault&) {
      return;
    }
    if (v.type == Type::Int && v.i == std::numeric_limits<std::int64_t>::min()) return;
    if (v.type != e->type) return;
    e = make_literal(v, e->pos);
  }

  bool commutative(const Expr& e) const {
    if (e.kind == ExprKind::Binary) {
      switch (e.binop) {
      case BinOp::Add:
      case BinOp::Mul:
      case BinOp::Eq:
      case BinOp::Ne: return true;
      default: return false;
      }
    }
    if (e.kind == ExprKind::Call && e.binding.kind == BindingKind::Builtin) {
      const auto id = builtins()[e.binding.index].id;
      return id == BuiltinId::Min || id == BuiltinId::Max;
    }
    return false;
  }

  void order(Expr& e) {
    for (auto& a : e.args) order(*a);
    if (e.kind == ExprKind::Binary && (e.binop == BinOp::Gt || e.binop == BinOp::Ge)) {
      if (effectful(*e.args[0]) && effectful(*e.args[1])) return;
      std::swap(e.args[0], e.args[1]);
      e.binop = e.binop == BinOp::Gt ? BinOp::Lt : BinOp::Le;
      return;
    }
    const bool logical = e.kind == ExprKind::Binary && (e.binop == BinOp::And || e.binop == BinOp::Or);
    if (logical) {
      if (effectful(*e.args[0]) || effectful(*e.args[1])) return;
    } else if (!commutative(e) || (effectful(*e.args[0]) && effectful(*e.args[1]))) {
      return;
    }
    Renderer r;
    if (r.expr_text(*e.args[1]) < r.expr_text(*e.args[0])) std::swap(e.args[0], e.args[1]);
  }

  static bool returns_bool(const Stmt& s, bool value) {
    const Stmt* r = &s;
    if (r->kind == StmtKind::Block && r->body.size() == 1) r = r->body.front().get();
    return r->kind == StmtKind::Return && r->value && r->value->kind == ExprKind::BoolLit && r->value->bval == value;
  }

  StmtPtr make_return(ExprPtr cond, bool negate, SourcePos pos) {
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::Return;
    s->pos = pos;
    if (negate) {
      auto n = std::make_unique<Expr>();
      n->kind = ExprKind::Unary;
      n->unop = UnOp::Not;
      n->type = Type::Bool;
      n->pos = cond->pos;
      n->args.push_back(std::move(cond));
      cond = std::move(n);
    }
    s->value = std::move(cond);
    return s;
  }

  void simplify_list(std::vector<StmtPtr>& list) {
    std::vector<StmtPtr> out;
    for (std::size_t k = 0; k < list.size(); ++k) {
      Stmt& s = *list[k];
      if (s.then_branch) simplify_branch(s.then_branch);
      if (s.else_branch) simplify_branch(s.else_branch);
      if (!s.body.empty()) simplify_list(s.body);
      if (s.kind == StmtKind::Block) {
        for (auto& b : s.body) out.push_back(std::move(b));
        continue;
      }
      if (s.kind == StmtKind::If) {
        const Stmt* else_stmt = s.else_branch.get();
        bool consumed_next = false;
        if (!else_stmt && k + 1 < list.size()) {
          else_stmt = list[k + 1].get();
          consumed_next = true;
        }
        if (else_stmt) {
          for (bool value : {true, false}) {
            if (returns_bool(*s.then_branch, value) && returns_bool(*else_stmt, !value)) {
              out.push_back(make_return(std::move(s.value), !value, s.pos));
              if (consumed_next) ++k;
              // Anything after an unconditional return is dead.
              k = list.size();
              break;
            }
          }
          if (k == list.size()) break;
        }
      }
      out.push_back(std::move(list[k]));
      if (s.kind == StmtKind::Return) break;
    }
    list = std::move(out);
  }

  void simplify_branch(StmtPtr& b) {
    std::vector<StmtPtr> one;
    one.push_back(std::move(b));
    simplify_list(one);
    if (one.size() == 1) {
      b = std::move(one.front());
      return;
    }
    b = std::make_unique<Stmt>();
    b->kind = StmtKind::Block;
    b->body = std::move(one);
  }

  Program& p_;
  std::vector<std::string> names_;
};

std::unique_ptr<Program> reparse(const std::string& text, HookSlot slot) {
  auto parsed = parse(text, slot);
  if (!parsed.program) throw DslError(std::move(parsed.diagnostics));
  auto diags = check(*parsed.program);
  if (!diags.empty()) throw DslError(std::move(diags));
  return std::move(parsed.program);
}

} // namespace

std::string render(const Program& p) { return Renderer().program(p); }

namespace {

std::unique_ptr<Program> canonical_pass(const Program& p) {
  auto work = clone(p);
  work->has_header = true;
  {
    Canonicalizer c(*work);
    c.rename();
    c.desugar();
  }
  // Re-check so the rewritten tree carries fresh bindings and types.
  work = reparse(render(*work), p.slot);
  {
    Canonicalizer c(*work);
    c.fold();
    c.order();
    c.simplify();
  }
  work = reparse(render(*work), p.slot);
  Canonicalizer(*work).rename();
  return work;
}

} // namespace

CanonicalForm canonicalize(const Program& p) {
  auto work = clone(p);
  if (!work->checked) {
    auto diags = check(*work);
    if (!diags.empty()) throw DslError(std::move(diags));
  }
  std::string text;
  for (int round = 0; round < 4; ++round) {
    work = canonical_pass(*work);
    std::string next = render(*work);
    if (next == text) break;
    text = std::move(next);
  }
  CanonicalForm out;
  out.text = std::move(text);
  out.program = std::shared_ptr<const Program>(std::move(work));
  return out;
}

bool is_synonymous(const Program& a, const Program& b) {
  if (a.slot != b.slot) return false;
  return canonicalize(a) == canonicalize(b);
}

} // namespace modsat::dsl
