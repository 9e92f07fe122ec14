#pragma once

#include <ostream>

namespace attest {

// Exit codes of theta_attest.
enum Exit : int {
  kPass = 0,
  kFail = 1,
  kUsage = 2,   // bad arguments or catalog parse failure
  kDomain = 3,  // a sample could not be evaluated
};

// The whole command line, writing reports to `out` and diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace attest
