#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "carleson/construction.hpp"
#include "carleson/measure.hpp"

namespace carleson {

struct ScanOptions {
  // Pair terms whose magnitude bound falls below prune_tolerance * trace are dropped;
  // the sum of dropped bounds is reported as IntensityResult::pruned_mass.
  double prune_tolerance = 1e-17;
  // For real spectra mu(Q_{r,k}) and mu(Q_{r,2^r-1-k}) are complex conjugates.
  bool use_reflection = true;
  // Skip arcs certified to lie below the running maximum (ranks are visited
  // deepest first so the maximum rises early).
  bool use_bounds = true;
  // OpenMP team size; 0 keeps the runtime default.
  int threads = 0;
};

/// Per-rank precomputation of mu(Q_{r,k}) / |I| as a trigonometric polynomial in k.
///
/// Coordinates whose Taylor indices are all multiples of 2^r (and not shared with
/// another coordinate) only see d = 0 pairs, so they form a k-independent diagonal D.
/// The remaining "mixed" coordinates give a dense block B(k) and a coupling C(k):
///   M(k) = [[B(k), C(k)], [C(k)^*, D]].
class RankKernel {
 public:
  RankKernel(const VectorSpectrum& spectrum, int rank, const ScanOptions& options = {});

  int rank() const noexcept { return rank_; }
  int mixed_count() const noexcept { return static_cast<int>(mixed_.size()); }
  int aligned_count() const noexcept { return static_cast<int>(aligned_.size()); }
  // Trace of M(k), independent of k.
  double trace() const noexcept { return trace_; }
  double pruned_mass() const noexcept { return pruned_mass_; }
  long long kept_pairs() const noexcept { return kept_pairs_; }

  // Dense M(k) in the original coordinate order.
  Eigen::MatrixXcd dense(std::int64_t k) const;

  struct ArcValue {
    double value = 0.0;
    bool skipped = false;
  };
  // lambda_max(M(k)). If skip_below is positive and lambda_max(M(k)) < skip_below
  // is certified by the secular function, returns {skip_below, skipped = true}.
  ArcValue largest(std::int64_t k, double skip_below = 0.0) const;

 private:
  struct Term {
    std::uint64_t t;
    std::complex<double> value;
  };

  void assemble(std::int64_t k, Eigen::MatrixXcd& block, Eigen::MatrixXcd& coupling) const;

  int rank_;
  int dim_;
  std::vector<int> mixed_;    // coordinates in B
  std::vector<int> aligned_;  // coordinates in D
  // B terms for local pairs (a <= b), row-major over the upper triangle.
  std::vector<std::vector<Term>> block_terms_;
  // Per mixed coordinate: residues and coefficient rows into C.
  std::vector<std::vector<std::uint64_t>> coupling_residues_;
  std::vector<Eigen::MatrixXcd> coupling_rows_;
  Eigen::VectorXd diagonal_;
  std::vector<std::complex<double>> phases_;  // e^{2 pi i m / 2^r}
  double trace_ = 0.0;
  double pruned_mass_ = 0.0;
  long long kept_pairs_ = 0;
};

/// lambda_max of [[B, C], [C^*, diag(D)]] via the secular equation
/// lambda = lambda_max(B + C (lambda - D)^{-1} C^*), with a dense fallback.
double arrow_largest_eigenvalue(const Eigen::MatrixXcd& block, const Eigen::MatrixXcd& coupling,
                                const Eigen::VectorXd& diagonal);

/// Parallel scan over every dyadic arc of rank <= max_rank (reflection-reduced
/// for real spectra). `value` is recomputed densely on the witness arc.
IntensityResult carleson_intensity(const VectorSpectrum& spectrum, int max_rank,
                                   const ScanOptions& options = {});

}  // namespace carleson
