// Desk-scale invariant battery covering every library module, used by the
// `selftest` CLI command and the test suite.
#pragma once

#include <iosfwd>
#include <string>

namespace qkz {

struct SelftestOptions {
  std::string grid = "default";  // "small" or "default"
  bool inject_fault = false;     // test hook: corrupt one solution on purpose
};

// Runs the battery. Per-suite timing goes to `diag`, a machine-readable
// summary (without timings, so identical inputs give identical bytes) to
// `out`. Returns 0 iff every suite passes.
int run_selftest(const SelftestOptions& opt, std::ostream& out, std::ostream& diag);

}  // namespace qkz
