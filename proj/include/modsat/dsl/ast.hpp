#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "modsat/hook_slot.hpp"

namespace modsat::dsl {

enum class Type : std::uint8_t { Void, Bool, Int, Real };

std::string_view type_name(Type t);

struct SourcePos {
  int line = 1;
  int col = 1;
};

struct Diagnostic {
  std::string code;
  std::string message;
  int line = 0;
  int col = 0;
};

std::string format_diagnostics(const std::vector<Diagnostic>& diags);

enum class BinOp : std::uint8_t { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnOp : std::uint8_t { Neg, Not };

std::string_view binop_text(BinOp op);

// What an identifier resolved to during checking.
enum class BindingKind : std::uint8_t { Unresolved, Local, Field, ArrayField, Constant, Builtin };

struct Binding {
  BindingKind kind = BindingKind::Unresolved;
  int index = -1; // local slot, field id, or builtin id
};

enum class ExprKind : std::uint8_t { IntLit, RealLit, BoolLit, Name, Index, Call, Cast, Unary, Binary, Ternary };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  SourcePos pos;
  std::int64_t ival = 0;
  double rval = 0.0;
  bool bval = false;
  std::string name; // Name, Index and Call targets
  BinOp binop = BinOp::Add;
  UnOp unop = UnOp::Neg;
  Type cast_to = Type::Int; // Cast
  std::vector<ExprPtr> args;

  // Filled by the checker.
  Type type = Type::Void;
  Binding binding;
};

enum class StmtKind : std::uint8_t { Decl, Assign, If, Return, ForEach, ExprStmt, Block };
enum class AssignOp : std::uint8_t { Set, Add, Sub, Mul, Div };
enum class IterKind : std::uint8_t { Vars, Learnts };

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
  StmtKind kind = StmtKind::Block;
  SourcePos pos;

  // Decl: `name` with declared type (auto_type when written as `let`).
  std::string name;
  Type decl_type = Type::Int;
  bool auto_type = false;

  AssignOp assign_op = AssignOp::Set;
  IterKind iter = IterKind::Vars;

  ExprPtr target; // Assign
  ExprPtr value;  // Decl initializer, Assign rhs, Return value, ExprStmt, If condition
  StmtPtr then_branch;
  StmtPtr else_branch;
  std::vector<StmtPtr> body; // Block and ForEach bodies

  // Filled by the checker: local slot for Decl and ForEach variables.
  int local = -1;
};

struct Param {
  std::string name;
  Type type = Type::Int;
};

struct Program {
  HookSlot slot = HookSlot::RestartCondition;
  bool has_header = false;
  std::vector<Param> params;
  std::vector<StmtPtr> body;

  // Filled by the checker.
  bool checked = false;
  int num_locals = 0;
  std::vector<Type> local_types;
};

// Formal parameters each slot receives.
std::vector<Param> default_params(HookSlot slot);
Type slot_return_type(HookSlot slot);

ExprPtr clone(const Expr& e);
StmtPtr clone(const Stmt& s);
std::unique_ptr<Program> clone(const Program& p);

} // namespace modsat::dsl
