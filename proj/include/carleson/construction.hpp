#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "carleson/dyadic.hpp"
#include "carleson/taylor_index.hpp"
#include "carleson/wavelet_profile.hpp"

namespace carleson {

/// a_l = 1 / (l sqrt(ln N)), 1 <= l <= N, N >= 2.
double coeff_a(int l, int dim);

/// omega_I = sum_{l=0}^{j-1} a_{j-l} e_l e^{2 pi i 2^l C_I} for rank j in [1, N];
/// the zero vector for any other rank. I must be an arc.
Eigen::VectorXcd omega_vector(const DyadicInterval& arc, int dim);

/// Fourier coefficient of the periodized f_I at a nonzero integer frequency:
///   4 pi |n| |I| psi_hat(|n| |I|) e^{-2 pi i n C_I}.
/// Throws DomainError for n == 0.
std::complex<double> g_hat_coefficient(const DyadicInterval& interval, std::int64_t n,
                                       const WaveletProfile& profile = WaveletProfile{});

/// One nonzero coordinate of a Taylor coefficient vector. `generation`/`offset`
/// record how n was produced: n = 2^{j-1} when l == j-1, else 2^j + 2^l.
struct SpectrumEntry {
  TaylorIndex n;
  int generation = 0;
  int offset = 0;
  int coordinate = 0;
  std::complex<double> value;
};

/// Sparse map n -> C^N, stored as coordinate-level entries sorted by (n, coordinate).
/// Immutable after construction; every stored value is nonzero.
class VectorSpectrum {
 public:
  VectorSpectrum() = default;
  VectorSpectrum(int dim, std::vector<SpectrumEntry> entries);

  int dim() const noexcept { return dim_; }
  std::span<const SpectrumEntry> entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  // Number of distinct Taylor indices carrying a nonzero vector.
  std::size_t support_size() const;
  std::vector<TaylorIndex> support() const;
  TaylorIndex max_index() const;

  // Dense coefficient vector at n (zero if n is not in the support).
  Eigen::VectorXcd at(const TaylorIndex& n) const;

  // Sum over the support of ||hat(n)||^2.
  double coefficient_energy() const;

  bool all_real() const;
  VectorSpectrum scaled(std::complex<double> factor) const;

 private:
  int dim_ = 0;
  std::vector<SpectrumEntry> entries_;
};

/// Taylor spectrum of phi = sum_I g_I^+ omega_I (closed form; one coordinate per index):
///   hat(2^{j-1})     =  2 pi psi_hat(1/2) a_1 2^j e_{j-1}
///   hat(2^j + 2^l)   = -4 pi (2^j + 2^l) psi_hat(1 + 2^{l-j}) a_{j-l} e_l,  l <= j-2
VectorSpectrum phi_spectrum(int dim, const WaveletProfile& profile = WaveletProfile{});

/// E(w) = sum_{l=0}^{N-1} w^{2^l} e_l.
VectorSpectrum test_spectrum_E(int dim);

/// N + N(N-1)/2: number of distinct indices in phi_spectrum(N).
std::size_t phi_support_count(int dim);

}  // namespace carleson
