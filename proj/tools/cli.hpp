#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace modsat {

// Exit codes: solve returns 10 (SAT), 20 (UNSAT) or 0 (unknown); every other
// subcommand returns 0 on success, 1 on usage errors and 2 on runtime failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace modsat
