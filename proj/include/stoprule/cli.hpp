#pragma once

#include "stoprule/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace stoprule::cli {

enum class Command { solve, asymptotic, verify, sweep, oracle, conjecture, two_threshold };
enum class Format { text, json, csv };

Command command_from_name(const std::string& name);
Format format_from_name(const std::string& name);
const char* to_string(Command command);
const char* to_string(Format format);

/// One fully specified invocation.  Variant parameters and command extras
/// (mu, threshold, method) ride in `params` as key=value pairs and are
/// validated against the command before any computation.
struct RunRequest {
  Command command = Command::solve;
  std::string variant;  ///< variant name, or example name for `conjecture`
  Index n = 0;          ///< 0 = not provided
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<Index> n_list;
  long trials = 0;      ///< 0 = skip Monte Carlo in `oracle`
  std::uint64_t seed = 20260814;
  Format format = Format::text;
  std::string out;      ///< empty = write to the stream passed to run()
};

/// Executes the request.  The report goes to `out` unless request.out names
/// a file; errors are one-line messages on `err`.  Returns the exit code:
/// 0 success, 1 validation error, 2 diagnostic error.
int run(const RunRequest& request, std::ostream& out, std::ostream& err);

}  // namespace stoprule::cli
