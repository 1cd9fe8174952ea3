#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "carleson/arc_scan.hpp"
#include "carleson/embedding.hpp"

namespace carleson {

struct Thresholds {
  double l1 = 50.0;
  double l2 = 10.0;
  double l3_increment = 0.05;  // final-rank increment / total
  double l4 = 1e-6;
  double l5_median_factor = 10.0;
  double omega = 1.0;
  double value_band = 1.5;      // value_spectral / (N ln N)
  double intensity_band = 2.0;
  double ratio_band = 1.6;      // ratio / sqrt(ln N)

  static Thresholds from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

struct CheckReport {
  std::string name;
  nlohmann::json parameters;
  double witnessed = 0.0;
  double threshold = 0.0;
  bool pass = false;
  nlohmann::json details = nlohmann::json::array();

  nlohmann::json to_json() const;
};

/// L1: max_{rank <= max_rank} int |g_I|^2 dA_1 / |I|.
/// L2: max over arcs K of rank <= min(max_rank, N) and a 64-vector net plus 64 seeded
///     random unit vectors of sum_{I in D(K), rk I <= N} |<omega_I, e>|^2 |I| / |K|.
/// Omega: max_{j <= N} ||omega_I||^2 6 ln N / pi^2.
std::vector<CheckReport> verify_construction(int dim, int max_rank, std::uint64_t seed,
                                                    const Thresholds& thresholds = {});

/// L3: truncated off-diagonal sums for arcs K of rank <= 3, with saturation.
/// L4: Littlewood-Paley pairing errors for ranks <= 5 and rd <= 4.
/// L5: localization statistic of Poisson extensions on a fixed grid (smooth ramp).
std::vector<CheckReport> verify_analysis(int max_rank, int max_rd,
                                                const Thresholds& thresholds = {});

CheckReport check_offdiagonal(int max_rank, int max_rd, const Thresholds& thresholds = {});
CheckReport check_littlewood_paley(int max_rank, int max_rd, const Thresholds& thresholds = {});
CheckReport check_localization(const Thresholds& thresholds = {});

/// Diagonal quadratic form for arc K: sum_{I in D(K), 1 <= rk I <= N} |I| omega_I omega_I^* / |K|.
Eigen::MatrixXcd diagonal_block_form(const DyadicInterval& arc, int dim);

/// Truncated off-diagonal sum for one arc K: sum over arcs I, J of rank <= max_rank,
/// circular rd <= max_rd, excluding I = J inside K, of |int_{Q_K} g_I conj(g_J) dA_1|.
double offdiagonal_partial_sum(const DyadicInterval& arc, int max_rank, int max_rd,
                          const WaveletProfile& profile = WaveletProfile{});

struct GrowthRow {
  int dim = 0;
  double intensity = 0.0;
  double value_spectral = 0.0;
  double value_paper = 0.0;
  double ratio = 0.0;
  double ratio_over_sqrtlog = 0.0;
  EmbeddingResult full;
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  // least-squares slope of value_spectral / N against ln N
  double slope = 0.0;
  double value_band = 1.0;
  double intensity_band = 1.0;
  double ratio_band = 1.0;
  std::vector<CheckReport> checks;

  std::string to_csv() const;
};

/// Thrown when a component fails mid-experiment; carries the rows finished so far.
class GrowthAborted : public std::runtime_error {
 public:
  GrowthAborted(const std::string& what, GrowthReport partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const GrowthReport& partial() const noexcept { return partial_; }

 private:
  GrowthReport partial_;
};

/// max_rank < 0 selects default_max_rank(N) for each N.
GrowthReport growth_experiment(const std::vector<int>& dims, int max_rank = -1,
                               const ScanOptions& options = {},
                               const Thresholds& thresholds = {},
                               const WaveletProfile& profile = WaveletProfile{});

}  // namespace carleson
