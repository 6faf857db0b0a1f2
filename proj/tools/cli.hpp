#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace density_lab::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kParse = 2,
  kPrecondition = 3,
  kVerification = 4,
};

// Runs one invocation; args exclude the program name. The human table goes
// to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace density_lab::cli
