#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lrk::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;   // I/O, format, or policy failure
inline constexpr int kExitUsage = 2;     // bad command line
inline constexpr int kExitIntegrity = 3; // model container failed its checks
inline constexpr int kExitVerify = 4;    // verify: residual norm disagrees with sigma_{k+1}

/// Runs the `lrk` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lrk::cli
