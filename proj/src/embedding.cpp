#include "carleson/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "carleson/disk_calculus.hpp"
#include "carleson/errors.hpp"

namespace carleson {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSixteenPiCubed = 16.0 * kPi * kPi * kPi;

void require_embedding_dim(int dim) {
  if (dim < 2) throw DomainError("dimension N must be >= 2, got " + std::to_string(dim));
  if (dim > kMaxEmbeddingDim) {
    throw DomainError("dimension N = " + std::to_string(dim) + " exceeds the supported maximum " +
                      std::to_string(kMaxEmbeddingDim));
  }
}

void require_generations(int j1, int l1, int j2, int l2) {
  if (j1 < 1 || j2 < 1 || j1 > 30 || j2 > 30) throw DomainError("generation outside [1, 30]");
  if (l1 < 0 || l2 < 0 || l1 >= j1 || l2 >= j2) throw DomainError("offset l must satisfy 0 <= l < j");
}

bool divisible(std::int64_t m, int j) { return mod_pow2(m, j) == 0; }

// Bucketed pair term of the spectral route.
struct PairTerm {
  TaylorIndex key;  // n - m + 2^300
  TaylorIndex m;
  TaylorIndex n;
  std::complex<double> z;
};

}  // namespace

CyclotomicTerm beta_sum_exact(std::int64_t m, int j1, int j2) {
  if (j1 < 1 || j2 < 1 || j1 > 30 || j2 > 30) throw DomainError("beta_sum generations outside [1, 30]");
  if (m > (std::int64_t{1} << 31) || m < -(std::int64_t{1} << 31)) {
    throw DomainError("beta_sum frequency outside [-2^31, 2^31]");
  }
  CyclotomicTerm out;
  out.log2_order = j1 + j2 + 1;
  if (!divisible(m, j1) || !divisible(m, j2)) return out;
  out.magnitude = std::int64_t{1} << (j1 + j2);
  // -pi (m/2^j1 - m/2^j2) = 2 pi m (2^j1 - 2^j2) / 2^{j1+j2+1}
  const std::int64_t numerator = m * ((std::int64_t{1} << j1) - (std::int64_t{1} << j2));
  out.exponent = mod_pow2(numerator, out.log2_order);
  return out;
}

std::complex<double> beta_sum(std::int64_t m, int j1, int j2) {
  const CyclotomicTerm t = beta_sum_exact(m, j1, j2);
  if (t.magnitude == 0) return {0.0, 0.0};
  return static_cast<double>(t.magnitude) * root_of_unity(t.exponent, t.log2_order);
}

double alpha_coefficient(std::int64_t m, int j1, int l1, int j2, int l2,
                         const WaveletProfile& profile) {
  require_generations(j1, l1, j2, l2);
  const std::int64_t n1 = m + (std::int64_t{1} << l1);
  const std::int64_t n2 = m + (std::int64_t{1} << l2);
  if (n1 < 0) throw DomainError("alpha_coefficient requires m >= -2^l1");
  if (n1 <= 0 || n2 <= 0) return 0.0;
  const double x1 = std::ldexp(static_cast<double>(n1), -j1);
  const double x2 = std::ldexp(static_cast<double>(n2), -j2);
  const double amp = x1 * profile(x1) * x2 * profile(x2);
  if (amp == 0.0) return 0.0;
  const double s = static_cast<double>(n1 + (std::int64_t{1} << l2));
  return kSixteenPiCubed * amp / ((s + 1.0) * (s + 2.0));
}

std::complex<double> generation_pair_sum(int j1, int l1, int j2, int l2,
                                         const WaveletProfile& profile) {
  require_generations(j1, l1, j2, l2);
  // alpha_m needs (m + 2^l1) / 2^j1 inside the open support (1/3, 4/3).
  const double scale = std::ldexp(1.0, j1);
  const auto first = static_cast<std::int64_t>(std::floor(kSupportLow * scale)) - (std::int64_t{1} << l1);
  const auto last = static_cast<std::int64_t>(std::ceil(kSupportHigh * scale)) - (std::int64_t{1} << l1);
  std::complex<double> total{0.0, 0.0};
  for (std::int64_t m = std::max(first, -(std::int64_t{1} << l1)); m <= last; ++m) {
    const std::complex<double> beta = beta_sum(m, j1, j2);
    if (beta == 0.0) continue;
    total += alpha_coefficient(m, j1, l1, j2, l2, profile) * beta;
  }
  return total;
}

double reduced_generation_pair(int j1, int l1, int j2, int l2, const WaveletProfile& profile) {
  require_generations(j1, l1, j2, l2);
  if (l1 == j1 - 1 && l2 == j2 - 1) {
    const double s = std::ldexp(1.0, l1) + std::ldexp(1.0, l2);
    return kSixteenPiCubed * std::ldexp(1.0, l1 + l2) * profile(std::ldexp(1.0, l1 - j1)) *
           profile(std::ldexp(1.0, l2 - j2)) / ((s + 1.0) * (s + 2.0));
  }
  if (j1 == j2 && l1 <= j1 - 2 && l2 <= j2 - 2) {
    const int j = j1;
    const double n1 = std::ldexp(1.0, j) + std::ldexp(1.0, l1);
    const double n2 = std::ldexp(1.0, j) + std::ldexp(1.0, l2);
    const double s = n1 + std::ldexp(1.0, l2);
    return kSixteenPiCubed * n1 * n2 * profile(1.0 + std::ldexp(1.0, l1 - j)) *
           profile(1.0 + std::ldexp(1.0, l2 - j)) / ((s + 1.0) * (s + 2.0));
  }
  return 0.0;
}

double embedding_pairing(const VectorSpectrum& test, const VectorSpectrum& symbol) {
  if (test.dim() != symbol.dim()) throw DomainError("embedding_pairing dimension mismatch");
  std::vector<std::vector<const SpectrumEntry*>> by_coordinate(symbol.dim());
  for (const auto& e : symbol.entries()) by_coordinate[e.coordinate].push_back(&e);

  const TaylorIndex offset = TaylorIndex::pow2(300);
  std::vector<PairTerm> terms;
  for (const auto& u : test.entries()) {
    for (const SpectrumEntry* c : by_coordinate[u.coordinate]) {
      terms.push_back({c->n + offset - u.n, u.n, c->n, u.value * std::conj(c->value)});
    }
  }
  std::sort(terms.begin(), terms.end(), [](const PairTerm& a, const PairTerm& b) {
    if (a.key != b.key) return a.key < b.key;
    if (a.m != b.m) return a.m < b.m;
    return a.n < b.n;
  });

  double total = 0.0;
  for (std::size_t begin = 0; begin < terms.size();) {
    std::size_t end = begin + 1;
    while (end < terms.size() && terms[end].key == terms[begin].key) ++end;
    double group = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      // int w^{m_i + n_k} conj(w)^{n_i + m_k} dA_1, equal exponents inside a bucket.
      const TaylorIndex self = terms[i].m + terms[i].n;
      group += std::norm(terms[i].z) * moment_disk(self, self);
      for (std::size_t k = i + 1; k < end; ++k) {
        const TaylorIndex s = terms[i].m + terms[k].n;
        group += 2.0 * std::real(terms[i].z * std::conj(terms[k].z)) * moment_disk(s, s);
      }
    }
    total += group;
    begin = end;
  }
  return total;
}

double embedding_form_spectral(int dim, const WaveletProfile& profile) {
  require_embedding_dim(dim);
  return embedding_pairing(test_spectrum_E(dim), phi_spectrum(dim, profile));
}

double embedding_form_closed(int dim, const WaveletProfile& profile) {
  require_embedding_dim(dim);
  const double inv_sqrt_log = 1.0 / std::sqrt(std::log(static_cast<double>(dim)));
  auto a = [&](int l) { return inv_sqrt_log / static_cast<double>(l); };

  // S1: l1 = j1 - 1, l2 = j2 - 1. With L = max(l1, l2), x = 2^{l1-L}, y = 2^{l2-L}:
  //   2^{l1+l2} / ((2^l1 + 2^l2 + 1)(2^l1 + 2^l2 + 2)) = xy / ((x+y+2^-L)(x+y+2^{1-L})).
  double s1 = 0.0;
  for (int l1 = 0; l1 < dim; ++l1) {
    for (int l2 = 0; l2 < dim; ++l2) {
      const int top = std::max(l1, l2);
      const double x = std::ldexp(1.0, l1 - top);
      const double y = std::ldexp(1.0, l2 - top);
      s1 += x * y / ((x + y + std::ldexp(1.0, -top)) * (x + y + std::ldexp(1.0, 1 - top)));
    }
  }
  const double head = profile(0.5);
  s1 *= a(1) * a(1) * head * head;

  // S2: j1 = j2 = j, l1, l2 <= j - 2, scaled by 2^{-2j} top and bottom.
  double s2 = 0.0;
  std::vector<double> weight;
  std::vector<double> shift;
  for (int j = 2; j <= dim; ++j) {
    weight.assign(static_cast<std::size_t>(j - 1), 0.0);
    shift.assign(static_cast<std::size_t>(j - 1), 0.0);
    for (int l = 0; l <= j - 2; ++l) {
      const double u = std::ldexp(1.0, l - j);
      shift[l] = u;
      weight[l] = a(j - l) * (1.0 + u) * profile(1.0 + u);
    }
    const double eps1 = std::ldexp(1.0, -j);
    const double eps2 = std::ldexp(1.0, 1 - j);
    for (int l1 = 0; l1 <= j - 2; ++l1) {
      for (int l2 = 0; l2 <= j - 2; ++l2) {
        const double base = 1.0 + shift[l1] + shift[l2];
        s2 += weight[l1] * weight[l2] / ((base + eps1) * (base + eps2));
      }
    }
  }
  return kSixteenPiCubed * (s1 + s2);
}

EmbeddingResult ratio_lower_bound(int dim, int max_rank, const ScanOptions& options,
                                  const WaveletProfile& profile) {
  require_embedding_dim(dim);
  EmbeddingResult out;
  out.dim = dim;
  out.value_spectral = embedding_form_spectral(dim, profile);
  out.value_paper = embedding_form_closed(dim, profile);
  const double scale = std::max(out.value_spectral, out.value_paper);
  out.relative_gap = scale > 0.0 ? std::abs(out.value_spectral - out.value_paper) / scale : 0.0;
  out.intensity = carleson_intensity(phi_spectrum(dim, profile), max_rank, options);
  out.ratio_lower_bound = out.intensity.value > 0.0
                              ? std::sqrt(out.value_spectral / dim) / out.intensity.value
                              : 0.0;
  return out;
}

}  // namespace carleson
