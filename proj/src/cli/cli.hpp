#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sgop::cli {

enum ExitCode : int {
  kOk = 0,
  kDomainError = 1,
  kUsageError = 2,
  kNotEfficient = 3,
  kNoCertificate = 4,
  kUncertified = 5,
  kNotSaddle = 6,
  kPropertyFailed = 7,
};

/// Runs `sgop <command> ...`; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgop::cli
