#pragma once

#include <ostream>

namespace starfd {

// Quick invariant checks on seeded random instances; one line per check.
// Returns true when every check passes.
bool run_selftest(std::ostream& out);

}  // namespace starfd
