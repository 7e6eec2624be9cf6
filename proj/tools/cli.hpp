#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cqlkit::cli {

enum ExitCode : int {
  kOk = 0,
  kQueryError = 1,     // parse or execution failure, bad dataset
  kUsage = 2,
  kCorpusError = 3,    // unreadable or malformed corpus
  kExhausted = 4,      // generator ran out of retries
};

/// Entry point shared by the binary and the tests. Results go to `out`,
/// diagnostics and warnings to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cqlkit::cli
