#pragma once

#include <Eigen/Dense>

#include "carleson/construction.hpp"
#include "carleson/disk_calculus.hpp"
#include "carleson/dyadic.hpp"

namespace carleson {

/// mu(Q) = int_Q phi phi^* dA_1 as a dense N x N Hermitian matrix.
struct HermitianForm {
  Eigen::MatrixXcd matrix;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

/// Direct assembly: M_pq = sum_{n,n'} hat(n)_p conj(hat(n')_q) int_Q w^n conj(w)^n' dA_1.
/// O(K^2) in the number K of stored coordinates; the scan kernel in arc_scan.hpp
/// is the fast path, this one is the reference.
HermitianForm gram_matrix(const CarlesonSquare& square, const VectorSpectrum& spectrum);

/// Largest eigenvalue of a Hermitian matrix (full self-adjoint decomposition).
/// Throws NumericError if the solver fails.
double largest_eigenvalue(const HermitianForm& form);

struct IntensityResult {
  // sup over scanned arcs of lambda_max(mu(Q_I)) / |I|
  double value = 0.0;
  DyadicInterval witness;
  int max_rank = 0;
  // Upper bound on lambda_max(mu(Q_I)) / |I| for every arc of rank > max_rank.
  double remainder_bound = 0.0;
  // Upper bound on the eigenvalue error from pair terms dropped by the scan kernel.
  double pruned_mass = 0.0;
  long long arcs_evaluated = 0;
};

/// Largest rank the scanners accept (2^rank arcs per rank).
inline constexpr int kMaxScanRank = 30;

/// min(N + 2, 16).
int default_max_rank(int dim);

/// Serial reference scan: every arc of rank <= max_rank, dense gram_matrix + eigen solve.
IntensityResult carleson_intensity_reference(const VectorSpectrum& spectrum, int max_rank);

/// Bound for arcs deeper than max_rank. With delta = 2^{-(max_rank+1)},
///   lambda_max(mu(Q_I)) / |I| <= sum_p sum_{n,n' in p} |hat(n)_p| |hat(n')_p| R_delta(n + n'),
/// where R_delta(s) = 2 pi int_{1-delta}^1 r^{s+1} (1 - r^2) dr.
double intensity_remainder_bound(const VectorSpectrum& spectrum, int max_rank);

/// int_D |g_I|^2 dA_1 = pi sum_{n != 0} |g_I^(n)|^2 / ((|n|+1)(|n|+2)).
double g_norm_dA1(const DyadicInterval& arc, const WaveletProfile& profile = WaveletProfile{});

}  // namespace carleson
