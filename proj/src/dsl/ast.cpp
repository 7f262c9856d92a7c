#include "modsat/dsl/ast.hpp"

#include <sstream>

namespace modsat::dsl {

std::string_view type_name(Type t) {
  switch (t) {
  case Type::Void: return "void";
  case Type::Bool: return "bool";
  case Type::Int: return "int";
  case Type::Real: return "double";
  }
  return "?";
}

std::string_view binop_text(BinOp op) {
  switch (op) {
  case BinOp::Add: return "+";
  case BinOp::Sub: return "-";
  case BinOp::Mul: return "*";
  case BinOp::Div: return "/";
  case BinOp::Mod: return "%";
  case BinOp::Lt: return "<";
  case BinOp::Le: return "<=";
  case BinOp::Gt: return ">";
  case BinOp::Ge: return ">=";
  case BinOp::Eq: return "==";
  case BinOp::Ne: return "!=";
  case BinOp::And: return "&&";
  case BinOp::Or: return "||";
  }
  return "?";
}

std::string format_diagnostics(const std::vector<Diagnostic>& diags) {
  std::ostringstream out;
  for (const auto& d : diags) out << d.line << ':' << d.col << ": [" << d.code << "] " << d.message << '\n';
  return out.str();
}

std::vector<Param> default_params(HookSlot slot) {
  switch (slot_class(slot)) {
  case SlotClass::VarBump: return {{"v", Type::Int}, {"inc", Type::Real}};
  case SlotClass::ClaBump: return {{"c", Type::Int}};
  default: return {};
  }
}

Type slot_return_type(HookSlot slot) { return slot_class(slot) == SlotClass::Condition ? Type::Bool : Type::Void; }

ExprPtr clone(const Expr& e) {
  auto out = std::make_unique<Expr>();
  out->kind = e.kind;
  out->pos = e.pos;
  out->ival = e.ival;
  out->rval = e.rval;
  out->bval = e.bval;
  out->name = e.name;
  out->binop = e.binop;
  out->unop = e.unop;
  out->cast_to = e.cast_to;
  out->type = e.type;
  out->binding = e.binding;
  out->args.reserve(e.args.size());
  for (const auto& a : e.args) out->args.push_back(clone(*a));
  return out;
}

StmtPtr clone(const Stmt& s) {
  auto out = std::make_unique<Stmt>();
  out->kind = s.kind;
  out->pos = s.pos;
  out->name = s.name;
  out->decl_type = s.decl_type;
  out->auto_type = s.auto_type;
  out->assign_op = s.assign_op;
  out->iter = s.iter;
  out->local = s.local;
  if (s.target) out->target = clone(*s.target);
  if (s.value) out->value = clone(*s.value);
  if (s.then_branch) out->then_branch = clone(*s.then_branch);
  if (s.else_branch) out->else_branch = clone(*s.else_branch);
  for (const auto& b : s.body) out->body.push_back(clone(*b));
  return out;
}

std::unique_ptr<Program> clone(const Program& p) {
  auto out = std::make_unique<Program>();
  out->slot = p.slot;
  out->has_header = p.has_header;
  out->params = p.params;
  out->checked = p.checked;
  out->num_locals = p.num_locals;
  out->local_types = p.local_types;
  for (const auto& s : p.body) out->body.push_back(clone(*s));
  return out;
}

} // namespace modsat::dsl
