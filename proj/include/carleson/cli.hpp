#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "carleson/verify.hpp"
#include "carleson/wavelet_profile.hpp"

namespace carleson {

inline constexpr int kSchemaVersion = 1;

/// Settings shared by every subcommand. A JSON config file mirrors these
/// fields; command-line flags override it.
struct RunConfig {
  std::vector<int> dims;
  std::optional<int> max_rank;  // unset: per-command default
  int max_rd = 8;
  RampKind ramp = RampKind::PolynomialC3;
  std::uint64_t seed = 1;
  std::string out;      // empty: stdout
  std::string format;   // json or csv; empty: per-command default
  std::string suite = "construction";
  int threads = 0;
  bool quiet = false;
  Thresholds thresholds;

  // Throws DomainError on dims outside [2, 256] or max_rank outside [0, 20].
  void validate() const;
  static RunConfig from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

/// Exit codes: 0 success, 1 failed verdict or numerical failure, 2 invalid input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace carleson
