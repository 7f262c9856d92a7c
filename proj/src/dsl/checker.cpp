#include <map>

#include "modsat/dsl/dsl.hpp"
#include "modsat/dsl/symbols.hpp"

namespace modsat::dsl {

namespace {

bool numeric(Type t) { return t == Type::Int || t == Type::Real || t == Type::Bool; }
bool int_like(Type t) { return t == Type::Int || t == Type::Bool; }

class Checker {
public:
  explicit Checker(Program& p) : p_(p), cls_(slot_class(p.slot)), bit_(class_bit(cls_)) {}

  std::vector<Diagnostic> run() {
    scopes_.emplace_back();
    for (const auto& prm : p_.params) declare(prm.name, prm.type, SourcePos{});
    check_list(p_.body);
    if (slot_return_type(p_.slot) == Type::Bool && !always_returns(p_.body))
      report("missing-return", "not every path returns a value", end_pos());
    p_.num_locals = static_cast<int>(local_types_.size());
    p_.local_types = local_types_;
    p_.checked = diags_.empty();
    return std::move(diags_);
  }

private:
  void report(const char* code, std::string msg, SourcePos pos) {
    diags_.push_back({code, std::move(msg), pos.line, pos.col});
  }

  SourcePos end_pos() const {
    if (p_.body.empty()) return {};
    return p_.body.back()->pos;
  }

  int declare(const std::string& name, Type t, SourcePos pos) {
    if (scopes_.back().count(name)) {
      report("redeclaration", "'" + name + "' is already declared in this scope", pos);
    } else if (find_field(name) >= 0 || find_constant(name) >= 0 || find_builtin(name) >= 0) {
      report("shadowed-name", "local '" + name + "' hides a solver name", pos);
    } else {
      for (const auto& scope : scopes_)
        if (scope.count(name)) report("shadowed-name", "local '" + name + "' hides an outer local", pos);
    }
    const int slot = static_cast<int>(local_types_.size());
    local_types_.push_back(t);
    scopes_.back()[name] = slot;
    return slot;
  }

  int lookup_local(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return f->second;
    }
    return -1;
  }

  static bool always_returns(const std::vector<StmtPtr>& list) {
    for (const auto& s : list)
      if (always_returns(*s)) return true;
    return false;
  }

  static bool always_returns(const Stmt& s) {
    switch (s.kind) {
    case StmtKind::Return: return true;
    case StmtKind::Block: return always_returns(s.body);
    case StmtKind::If: return s.else_branch && always_returns(*s.then_branch) && always_returns(*s.else_branch);
    default: return false;
    }
  }

  void check_list(std::vector<StmtPtr>& list) {
    for (auto& s : list) check_stmt(*s);
  }

  void check_scoped(Stmt& s) {
    scopes_.emplace_back();
    check_stmt(s);
    scopes_.pop_back();
  }

  // Whether a value of type `from` may be stored into `to`.
  bool assignable(Type to, Type from) const {
    if (from == Type::Void) return false;
    if (to == Type::Bool) return from == Type::Bool;
    return numeric(from);
  }

  void check_stmt(Stmt& s) {
    switch (s.kind) {
    case StmtKind::Block:
      scopes_.emplace_back();
      check_list(s.body);
      scopes_.pop_back();
      break;
    case StmtKind::Decl: {
      Type t = s.decl_type;
      if (s.value) {
        const Type vt = value_type(*s.value);
        if (s.auto_type) {
          if (vt != Type::Void) t = vt;
        } else if (vt != Type::Void && !assignable(t, vt)) {
          report("type-mismatch",
                  "cannot initialize " + std::string(type_name(t)) + " '" + s.name + "' from " +
                      std::string(type_name(vt)),
                  s.value->pos);
        }
      }
      s.decl_type = t;
      s.local = declare(s.name, t, s.pos);
      break;
    }
    case StmtKind::Assign: check_assign(s); break;
    case StmtKind::If: {
      const Type ct = value_type(*s.value);
      if (ct != Type::Void && ct != Type::Bool)
        report("type-mismatch", "if condition must be bool, found " + std::string(type_name(ct)), s.value->pos);
      check_scoped(*s.then_branch);
      if (s.else_branch) check_scoped(*s.else_branch);
      break;
    }
    case StmtKind::Return: {
      const Type want = slot_return_type(p_.slot);
      if (!s.value) {
        if (want != Type::Void) report("return-type", "condition must return a bool", s.pos);
        break;
      }
      const Type vt = value_type(*s.value);
      if (want == Type::Void) report("return-type", "this slot returns nothing", s.value->pos);
      else if (vt != Type::Void && vt != Type::Bool)
        report("return-type", "condition must return bool, found " + std::string(type_name(vt)), s.value->pos);
      break;
    }
    case StmtKind::ForEach:
      scopes_.emplace_back();
      s.local = declare(s.name, Type::Int, s.pos);
      check_list(s.body);
      scopes_.pop_back();
      break;
    case StmtKind::ExprStmt:
      if (s.value->kind != ExprKind::Call) report("syntax-error", "expression statement has no effect", s.value->pos);
      check_expr(*s.value);
      break;
    }
  }

  void check_assign(Stmt& s) {
    Expr& target = *s.target;
    Type tt = Type::Void;
    if (target.kind == ExprKind::Name) {
      const int local = lookup_local(target.name);
      if (local >= 0) {
        target.binding = {BindingKind::Local, local};
        tt = local_types_[local];
      } else if (const int f = find_field(target.name); f >= 0) {
        const auto& info = fields()[f];
        if (info.index != IndexSpace::None) {
          report("type-mismatch", "array '" + target.name + "' needs an index", target.pos);
        } else if (writable(info, target)) {
          target.binding = {BindingKind::Field, f};
          tt = info.type;
        }
      } else if (find_constant(target.name) >= 0) {
        report("illegal-write", "cannot assign to constant '" + target.name + "'", target.pos);
      } else {
        report("unknown-identifier", "unknown identifier '" + target.name + "'", target.pos);
      }
      target.type = tt;
    } else {
      tt = check_expr(target);
      if (target.binding.kind == BindingKind::ArrayField && !writable(fields()[target.binding.index], target)) {
        tt = Type::Void;
      }
    }
    const Type vt = value_type(*s.value);
    if (tt == Type::Void || vt == Type::Void) return;
    if (s.assign_op == AssignOp::Set) {
      if (!assignable(tt, vt))
        report("type-mismatch",
               "cannot assign " + std::string(type_name(vt)) + " to " + std::string(type_name(tt)), s.value->pos);
      return;
    }
    if (tt == Type::Bool)
      report("type-mismatch", "compound assignment needs a numeric target", s.pos);
  }

  bool writable(const FieldInfo& info, const Expr& at) {
    if (info.writers == 0) {
      report("illegal-write", "'" + std::string(info.name) + "' is read-only", at.pos);
      return false;
    }
    if ((info.writers & bit_) == 0) {
      report("capability", "slot '" + std::string(slot_name(p_.slot)) + "' may not write '" + std::string(info.name) + "'",
             at.pos);
      return false;
    }
    return true;
  }

  // Type of an expression used as a value; a void call here is an error.
  Type value_type(Expr& e) {
    const Type t = check_expr(e);
    if (t == Type::Void && e.kind == ExprKind::Call && e.binding.kind == BindingKind::Builtin)
      report("type-mismatch", "'" + e.name + "' does not produce a value", e.pos);
    return t;
  }

  Type check_expr(Expr& e) {
    e.type = infer(e);
    return e.type;
  }

  Type infer(Expr& e) {
    switch (e.kind) {
    case ExprKind::IntLit: return Type::Int;
    case ExprKind::RealLit: return Type::Real;
    case ExprKind::BoolLit: return Type::Bool;
    case ExprKind::Name: {
      if (const int local = lookup_local(e.name); local >= 0) {
        e.binding = {BindingKind::Local, local};
        return local_types_[local];
      }
      if (const int f = find_field(e.name); f >= 0) {
        const auto& info = fields()[f];
        if (info.index != IndexSpace::None) {
          report("type-mismatch", "array '" + e.name + "' needs an index", e.pos);
          return Type::Void;
        }
        e.binding = {BindingKind::Field, f};
        return info.type;
      }
      if (const int c = find_constant(e.name); c >= 0) {
        e.binding = {BindingKind::Constant, c};
        return Type::Int;
      }
      if (find_builtin(e.name) >= 0) {
        report("syntax-error", "builtin '" + e.name + "' must be called", e.pos);
        return Type::Void;
      }
      report("unknown-identifier", "unknown identifier '" + e.name + "'", e.pos);
      return Type::Void;
    }
    case ExprKind::Index: {
      const Type it = value_type(*e.args[0]);
      if (it != Type::Void && !int_like(it))
        report("type-mismatch", "index must be int, found " + std::string(type_name(it)), e.args[0]->pos);
      const int f = find_field(e.name);
      if (f < 0) {
        report("unknown-identifier", "unknown array '" + e.name + "'", e.pos);
        return Type::Void;
      }
      const auto& info = fields()[f];
      if (info.index == IndexSpace::None) {
        report("type-mismatch", "'" + e.name + "' is not an array", e.pos);
        return Type::Void;
      }
      e.binding = {BindingKind::ArrayField, f};
      return info.type;
    }
    case ExprKind::Call: return infer_call(e);
    case ExprKind::Cast: {
      const Type at = value_type(*e.args[0]);
      if (at == Type::Void) return e.cast_to;
      if (!numeric(at)) report("type-mismatch", "cannot cast this value", e.pos);
      return e.cast_to;
    }
    case ExprKind::Unary: {
      const Type at = value_type(*e.args[0]);
      if (e.unop == UnOp::Not) {
        if (at != Type::Void && at != Type::Bool)
          report("type-mismatch", "'!' needs a bool operand, found " + std::string(type_name(at)), e.pos);
        return Type::Bool;
      }
      if (at == Type::Void) return Type::Void;
      return at == Type::Real ? Type::Real : Type::Int;
    }
    case ExprKind::Binary: {
      const Type a = value_type(*e.args[0]);
      const Type b = value_type(*e.args[1]);
      const std::string op(binop_text(e.binop));
      switch (e.binop) {
      case BinOp::And:
      case BinOp::Or:
        if ((a != Type::Void && a != Type::Bool) || (b != Type::Void && b != Type::Bool))
          report("type-mismatch", "'" + op + "' needs bool operands", e.pos);
        return Type::Bool;
      case BinOp::Eq:
      case BinOp::Ne:
      case BinOp::Lt:
      case BinOp::Le:
      case BinOp::Gt:
      case BinOp::Ge: return Type::Bool;
      case BinOp::Mod:
        if (a == Type::Void || b == Type::Void) return Type::Void;
        if (!int_like(a) || !int_like(b)) report("type-mismatch", "'%' needs int operands", e.pos);
        return Type::Int;
      default:
        if (a == Type::Void || b == Type::Void) return Type::Void;
        return int_like(a) && int_like(b) ? Type::Int : Type::Real;
      }
    }
    case ExprKind::Ternary: {
      const Type c = value_type(*e.args[0]);
      if (c != Type::Void && c != Type::Bool)
        report("type-mismatch", "'?:' condition must be bool, found " + std::string(type_name(c)), e.args[0]->pos);
      const Type a = value_type(*e.args[1]);
      const Type b = value_type(*e.args[2]);
      if (a == Type::Void || b == Type::Void) return Type::Void;
      if (a == b) return a;
      if (a == Type::Bool || b == Type::Bool) {
        report("type-mismatch", "'?:' branches have incompatible types", e.pos);
        return Type::Void;
      }
      return Type::Real;
    }
    }
    return Type::Void;
  }

  Type infer_call(Expr& e) {
    std::vector<Type> at;
    for (auto& a : e.args) at.push_back(value_type(*a));
    const int b = find_builtin(e.name);
    if (b < 0) {
      if (lookup_local(e.name) >= 0 || find_field(e.name) >= 0)
        report("syntax-error", "'" + e.name + "' is not callable", e.pos);
      else
        report("unknown-identifier", "unknown function '" + e.name + "'", e.pos);
      return Type::Void;
    }
    const auto& info = builtins()[b];
    if (static_cast<int>(e.args.size()) != info.arity) {
      report("arity",
             "'" + e.name + "' takes " + std::to_string(info.arity) + " argument(s), got " +
                 std::to_string(e.args.size()),
             e.pos);
      return Type::Void;
    }
    if ((info.callers & bit_) == 0) {
      report("capability", "slot '" + std::string(slot_name(p_.slot)) + "' may not call '" + e.name + "'", e.pos);
      return Type::Void;
    }
    for (std::size_t k = 0; k < at.size(); ++k)
      if (at[k] != Type::Void && !numeric(at[k]))
        report("type-mismatch", "argument to '" + e.name + "' must be numeric", e.args[k]->pos);
    e.binding = {BindingKind::Builtin, b};
    switch (info.id) {
    case BuiltinId::Min:
    case BuiltinId::Max: return int_like(at[0]) && int_like(at[1]) ? Type::Int : Type::Real;
    case BuiltinId::Abs: return int_like(at[0]) ? Type::Int : Type::Real;
    case BuiltinId::Floor:
    case BuiltinId::Ceil:
    case BuiltinId::Sqrt:
    case BuiltinId::Log:
    case BuiltinId::Exp:
    case BuiltinId::Rand01:
    case BuiltinId::ProgressEstimate: return Type::Real;
    case BuiltinId::HeapTop: return Type::Int;
    case BuiltinId::InHeap: return Type::Bool;
    default: return Type::Void;
    }
  }

  Program& p_;
  SlotClass cls_;
  std::uint8_t bit_;
  std::vector<std::map<std::string, int>> scopes_;
  std::vector<Type> local_types_;
  std::vector<Diagnostic> diags_;
};

} // namespace

std::vector<Diagnostic> check(Program& p) { return Checker(p).run(); }

} // namespace modsat::dsl
