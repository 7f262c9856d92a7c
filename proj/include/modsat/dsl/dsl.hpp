#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "modsat/dsl/ast.hpp"
#include "modsat/dsl/value.hpp"
#include "modsat/solver_view.hpp"

namespace modsat::dsl {

// ---------------------------------------------------------------------------
// Front end
// ---------------------------------------------------------------------------

struct ParseResult {
  std::unique_ptr<Program> program; // null when diagnostics are present
  std::vector<Diagnostic> diagnostics;
};

// Accepts either a bare statement list or a single function definition whose
// name matches the slot (`bool restart_condition() { ... }`).
ParseResult parse(std::string_view source, HookSlot slot);

// Resolves names, assigns local slots and types, and enforces the slot's
// signature and capability table. Annotates `p` in place.
std::vector<Diagnostic> check(Program& p);

// parse + check. Throws DslError with the combined diagnostics.
std::shared_ptr<const Program> compile(std::string_view source, HookSlot slot);

class DslError : public std::runtime_error {
public:
  explicit DslError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

private:
  std::vector<Diagnostic> diags_;
};

// Text strictly between "// start <slot>" and "// end <slot>". Falls back to
// any start/end marker pair when no slot name is given.
std::optional<std::string> extract_marked(std::string_view text, std::optional<std::string_view> slot = {});

// ---------------------------------------------------------------------------
// Interpreter
// ---------------------------------------------------------------------------

enum class FaultKind { DivisionByZero, StepBudget, Domain, IndexRange, Overflow };

std::string_view fault_name(FaultKind k);

class RuntimeFault : public std::runtime_error {
public:
  RuntimeFault(FaultKind kind, const std::string& what, SourcePos pos)
      : std::runtime_error(what), kind_(kind), pos_(pos) {}
  FaultKind kind() const { return kind_; }
  SourcePos pos() const { return pos_; }

private:
  FaultKind kind_;
  SourcePos pos_;
};

// 10 per variable, 10 per learnt clause, plus fixed headroom.
std::uint64_t step_budget(const SolverView& view);

struct RunOutcome {
  Value result;
  std::uint64_t steps = 0;
};

// Big-step evaluation of a checked program. Throws RuntimeFault.
RunOutcome interpret(const Program& p, SolverView& view, std::span<const Value> args);
RunOutcome interpret(const Program& p, SolverView& view, std::span<const Value> args, std::uint64_t budget);

// ---------------------------------------------------------------------------
// Canonical forms
// ---------------------------------------------------------------------------

// Deterministic pretty printer for a checked program. The output parses back
// to an equivalent program.
std::string render(const Program& p);

struct CanonicalForm {
  std::shared_ptr<const Program> program;
  std::string text;

  bool operator==(const CanonicalForm& o) const { return text == o.text; }
};

CanonicalForm canonicalize(const Program& p);
bool is_synonymous(const Program& a, const Program& b);

} // namespace modsat::dsl
