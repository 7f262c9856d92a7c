#pragma once

#include <string>

#include "modsat/hook_slot.hpp"
#include "modsat/rng.hpp"

namespace modsat::test {

// A random well-typed DSL body plus a second rendering of the same tree that
// differs only by synonym-preserving rewrites: renamed locals, swapped
// commutative operands, flipped comparisons, extra parentheses, split integer
// constants and comments. Supported slots: reduce_condition, restart_condition
// (pure conditions) and restart_function (writes heuristic state).
struct GeneratedProgram {
  HookSlot slot;
  std::string source;
  std::string variant;
};

GeneratedProgram random_program(Rng& rng, HookSlot slot);

} // namespace modsat::test
