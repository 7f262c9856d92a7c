#pragma once

#include <optional>

#include "modsat/cnf.hpp"

namespace modsat::test {

// Exhaustive satisfiability check, 64 assignments per word. Returns a
// satisfying assignment or nullopt. Intended for num_vars <= 26.
std::optional<Assignment> brute_force(const Formula& f);

inline bool brute_force_sat(const Formula& f) { return brute_force(f).has_value(); }

// Literal-by-literal evaluation written independently of modsat::evaluate.
bool satisfies(const Formula& f, const Assignment& a);

} // namespace modsat::test
