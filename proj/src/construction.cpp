#include "carleson/construction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "carleson/errors.hpp"

namespace carleson {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dim(int dim) {
  if (dim < 2) throw DomainError("dimension N must be >= 2, got " + std::to_string(dim));
  if (dim > TaylorIndex::kBits - 8) throw DomainError("dimension N too large for exact indices");
}

}  // namespace

double coeff_a(int l, int dim) {
  require_dim(dim);
  if (l < 1 || l > dim) throw DomainError("coeff_a index outside [1, N]");
  return 1.0 / (static_cast<double>(l) * std::sqrt(std::log(static_cast<double>(dim))));
}

Eigen::VectorXcd omega_vector(const DyadicInterval& arc, int dim) {
  require_dim(dim);
  if (!arc.is_arc()) throw DomainError("omega_vector expects a dyadic arc");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  const int j = arc.rank;
  if (j < 1 || j > dim) return out;
  // 2^l C_I = 2^l (2k+1) / 2^{j+1}; exact residue mod 2^{j+1}.
  const auto odd = static_cast<std::uint64_t>(2 * arc.index + 1);
  for (int l = 0; l < j; ++l) {
    out[l] = coeff_a(j - l, dim) * root_of_unity(odd << l, j + 1);
  }
  return out;
}

std::complex<double> g_hat_coefficient(const DyadicInterval& interval, std::int64_t n,
                                       const WaveletProfile& profile) {
  if (n == 0) throw DomainError("g_hat_coefficient is undefined at n = 0");
  const double len = interval.length();
  const double freq = std::abs(static_cast<double>(n)) * len;
  const double amplitude = 4.0 * kPi * freq * profile(freq);
  if (amplitude == 0.0) return {0.0, 0.0};
  // n C_I = n (2k+1) / 2^{j+1}; reduce exactly, then negate.
  const int bits = interval.rank + 1;
  if (bits < 1 || bits > 63) throw DomainError("g_hat_coefficient rank outside [0, 62]");
  const std::uint64_t res = mod_pow2(n, bits) * mod_pow2(2 * interval.index + 1, bits);
  return amplitude * root_of_unity(0 - res, bits);
}

VectorSpectrum::VectorSpectrum(int dim, std::vector<SpectrumEntry> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim_ < 1) throw DomainError("spectrum dimension must be positive");
  std::erase_if(entries_, [](const SpectrumEntry& e) { return e.value == 0.0; });
  for (const auto& e : entries_) {
    if (e.coordinate < 0 || e.coordinate >= dim_) throw DomainError("spectrum coordinate out of range");
    if (e.n.is_zero()) throw DomainError("spectrum index must be >= 1");
  }
  std::sort(entries_.begin(), entries_.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
    if (a.n != b.n) return a.n < b.n;
    return a.coordinate < b.coordinate;
  });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].n == entries_[i - 1].n && entries_[i].coordinate == entries_[i - 1].coordinate) {
      throw DomainError("duplicate (n, coordinate) in spectrum");
    }
  }
}

std::size_t VectorSpectrum::support_size() const { return support().size(); }

std::vector<TaylorIndex> VectorSpectrum::support() const {
  std::vector<TaylorIndex> out;
  for (const auto& e : entries_) {
    if (out.empty() || out.back() != e.n) out.push_back(e.n);
  }
  return out;
}

TaylorIndex VectorSpectrum::max_index() const {
  return entries_.empty() ? TaylorIndex{} : entries_.back().n;
}

Eigen::VectorXcd VectorSpectrum::at(const TaylorIndex& n) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim_);
  auto lo = std::lower_bound(entries_.begin(), entries_.end(), n,
                             [](const SpectrumEntry& e, const TaylorIndex& key) { return e.n < key; });
  for (; lo != entries_.end() && lo->n == n; ++lo) out[lo->coordinate] = lo->value;
  return out;
}

double VectorSpectrum::coefficient_energy() const {
  double total = 0.0;
  for (const auto& e : entries_) total += std::norm(e.value);
  return total;
}

bool VectorSpectrum::all_real() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const SpectrumEntry& e) { return e.value.imag() == 0.0; });
}

VectorSpectrum VectorSpectrum::scaled(std::complex<double> factor) const {
  auto copy = entries_;
  for (auto& e : copy) e.value *= factor;
  return VectorSpectrum(dim_, std::move(copy));
}

VectorSpectrum phi_spectrum(int dim, const WaveletProfile& profile) {
  require_dim(dim);
  std::vector<SpectrumEntry> entries;
  entries.reserve(phi_support_count(dim));
  const double head = 2.0 * kPi * profile(0.5) * coeff_a(1, dim);
  for (int j = 1; j <= dim; ++j) {
    entries.push_back({TaylorIndex::pow2(j - 1), j, j - 1, j - 1, head * std::ldexp(1.0, j)});
    for (int l = 0; l <= j - 2; ++l) {
      const double ratio = std::ldexp(1.0, l - j);
      const double n = std::ldexp(1.0 + ratio, j);
      const double value = -4.0 * kPi * n * profile(1.0 + ratio) * coeff_a(j - l, dim);
      entries.push_back({index_from_provenance(j, l), j, l, l, value});
    }
  }
  return VectorSpectrum(dim, std::move(entries));
}

VectorSpectrum test_spectrum_E(int dim) {
  require_dim(dim);
  std::vector<SpectrumEntry> entries;
  entries.reserve(static_cast<std::size_t>(dim));
  for (int l = 0; l < dim; ++l) {
    entries.push_back({TaylorIndex::pow2(l), l + 1, l, l, {1.0, 0.0}});
  }
  return VectorSpectrum(dim, std::move(entries));
}

std::size_t phi_support_count(int dim) {
  const auto n = static_cast<std::size_t>(dim);
  return n + n * (n - 1) / 2;
}

}  // namespace carleson
