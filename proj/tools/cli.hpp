#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dynkin::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kNotCertified = 1;
inline constexpr int kValidation = 2;
inline constexpr int kNonConvergence = 3;
inline constexpr int kCapExceeded = 4;
inline constexpr int kInternal = 5;  // a cross-check inside the library failed

// Runs the command line given without the program name, e.g.
// {"solve", "--example", "paper-5-1", "--epsilon", "1/100"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dynkin::cli
