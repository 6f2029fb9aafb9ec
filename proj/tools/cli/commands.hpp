#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tsep::cli {

// Exit statuses shared by every subcommand.
enum Exit : int {
  kOk = 0,
  kNegative = 1,
  kError = 2,
  kBudget = 3,
};

/// Runs `tsep <args...>` in-process. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace tsep::cli
