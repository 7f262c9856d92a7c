#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include "modsat/hook_slot.hpp"
#include "modsat/solver_view.hpp"

namespace modsat {

// Callable form of a heuristic suite, as the solver consumes it.
struct HookTable {
  std::function<bool(SolverView&)> rephase_condition;
  std::function<void(SolverView&)> rephase_function;
  std::function<bool(SolverView&)> reduce_condition;
  std::function<bool(SolverView&)> restart_condition;
  std::function<void(SolverView&)> restart_function;
  std::function<void(SolverView&, Var, double)> var_bump_activity;
  // Argument is the clause's position in the learnt list.
  std::function<void(SolverView&, std::int64_t)> cla_bump_activity;

  bool complete() const {
    return rephase_condition && rephase_function && reduce_condition && restart_condition && restart_function &&
           var_bump_activity && cla_bump_activity;
  }
};

// A heuristic failed at run time (for DSL hooks: a RuntimeFault). Aborts the
// solve; the evaluation harness records the run as a failure.
class HookFault : public std::runtime_error {
public:
  HookFault(HookSlot slot, const std::string& detail)
      : std::runtime_error(std::string(slot_name(slot)) + ": " + detail), slot_(slot), detail_(detail) {}

  HookSlot slot() const { return slot_; }
  const std::string& detail() const { return detail_; }

private:
  HookSlot slot_;
  std::string detail_;
};

} // namespace modsat
