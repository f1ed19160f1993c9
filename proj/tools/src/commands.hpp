#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gptwb/scalar.hpp"
#include "json.hpp"

namespace gptwb::cli {

struct RunConfig {
  Tolerance tol;
  std::uint64_t seed = 20240601;
  bool exact = false;
};

/// A report plus the process exit code: 0 Yes, 1 No, 2 Inconclusive for
/// verdicts, 0 for plain reports.
struct Outcome {
  nlohmann::ordered_json report;
  int exit_code = 0;
};

Outcome cmd_tables(const std::string& which, const RunConfig& cfg);

/// Is `b` a post-processing of `a`?
Outcome cmd_check_postprocess(const std::string& a, const std::string& b, const RunConfig& cfg);

/// Is the observable in `a` simulable by the simulators? Each simulator
/// source is a JSON file (one observable or a list) or `irr(<space literal>)`.
Outcome cmd_check_sim(const std::string& a, const std::vector<std::string>& simulators, const RunConfig& cfg);

Outcome cmd_check_compat(const std::vector<std::string>& files, const RunConfig& cfg);

/// Is D ultraweakly majorized by C?
Outcome cmd_check_ultraweak(const std::string& d, const std::string& c, const RunConfig& cfg);

Outcome cmd_comm(const std::string& c, const RunConfig& cfg);

}  // namespace gptwb::cli
