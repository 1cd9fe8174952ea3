#pragma once

#include <complex>
#include <cstdint>

#include "carleson/arc_scan.hpp"
#include "carleson/construction.hpp"
#include "carleson/measure.hpp"
#include "carleson/wavelet_profile.hpp"

namespace carleson {

/// Largest N accepted by the embedding routes.
inline constexpr int kMaxEmbeddingDim = 256;

/// beta_m = sum_{I1 in D_j1, I2 in D_j2} e^{-2 pi i m (C_I1 - C_I2)}
///        = 2^{j1+j2} e^{-i pi (m/2^j1 - m/2^j2)} if 2^j1 | m and 2^j2 | m, else 0.
std::complex<double> beta_sum(std::int64_t m, int j1, int j2);

/// beta_m as an exact element magnitude * zeta^exponent, zeta = e^{2 pi i / 2^log2_order}.
struct CyclotomicTerm {
  std::int64_t magnitude = 0;  // 0 when beta_m vanishes
  std::uint64_t exponent = 0;  // reduced mod 2^log2_order
  int log2_order = 1;
};
CyclotomicTerm beta_sum_exact(std::int64_t m, int j1, int j2);

/// alpha_m for fixed generations (j1, l1), (j2, l2), l < j:
///   16 pi^3 2^{-j1-j2} (m + 2^l1)(m + 2^l2) psi((m + 2^l1)/2^j1) psi((m + 2^l2)/2^j2)
///   / ((m + 2^l1 + 2^l2 + 1)(m + 2^l1 + 2^l2 + 2)),  m >= -2^l1.
double alpha_coefficient(std::int64_t m, int j1, int l1, int j2, int l2,
                         const WaveletProfile& profile = WaveletProfile{});

/// sum_m alpha_m beta_m over every m with a nonzero alpha (generations <= 30).
std::complex<double> generation_pair_sum(int j1, int l1, int j2, int l2,
                                         const WaveletProfile& profile = WaveletProfile{});

/// The same quantity after the surviving-term analysis: only
/// (l1, l2) = (j1-1, j2-1) at m = 0, or j1 = j2 = j with l1, l2 <= j-2 at m = 2^j.
double reduced_generation_pair(int j1, int l1, int j2, int l2,
                               const WaveletProfile& profile = WaveletProfile{});

/// int_D |<E(w), phi(w)>|^2 dA_1 from the sparse spectra: pair terms are bucketed
/// by the conserved index n - m and summed with the disk moments.
double embedding_form_spectral(int dim, const WaveletProfile& profile = WaveletProfile{});

/// Spectral pairing for arbitrary spectra (E-side first).
double embedding_pairing(const VectorSpectrum& test, const VectorSpectrum& symbol);

/// 16 pi^3 (S1 + S2) from the reduced closed form with dominant powers of two factored out.
double embedding_form_closed(int dim, const WaveletProfile& profile = WaveletProfile{});

struct EmbeddingResult {
  int dim = 0;
  double value_spectral = 0.0;
  double value_paper = 0.0;
  double relative_gap = 0.0;
  IntensityResult intensity;
  // sqrt(value_spectral / N) / intensity.value
  double ratio_lower_bound = 0.0;
};

EmbeddingResult ratio_lower_bound(int dim, int max_rank, const ScanOptions& options = {},
                                  const WaveletProfile& profile = WaveletProfile{});

}  // namespace carleson
