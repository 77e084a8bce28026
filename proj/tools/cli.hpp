#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phgen::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kDomain = 3,
  kNonConvergence = 4,
};

/// Runs the phgen command line. args excludes the program name. Data goes
/// to out (or the --out file), diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phgen::cli
