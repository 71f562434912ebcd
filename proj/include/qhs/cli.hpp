#pragma once

#include <iosfwd>

namespace qhs {

// Exit codes: 0 pass or feasible, 1 fail or infeasible, 2 usage or I/O error.
// Results go to out, diagnostics to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qhs
