#pragma once

// Command-line front end. run_cli is the whole program; main() only forwards
// to it so the tests can drive every command in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace josephson::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitNotFound = 4;

inline constexpr const char* kVersion = "0.1.0";

/// Parses args (args[0] is the program name), runs the command and writes
/// the artifact to --out or to `out`. Diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace josephson::cli
