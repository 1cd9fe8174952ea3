#include "carleson/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "carleson/errors.hpp"

namespace carleson {

namespace {

void require_scan_rank(int max_rank) {
  if (max_rank < 0 || max_rank > kMaxScanRank) {
    throw DomainError("max_rank must lie in [0, " + std::to_string(kMaxScanRank) + "]");
  }
}

}  // namespace

HermitianForm gram_matrix(const CarlesonSquare& square, const VectorSpectrum& spectrum) {
  const int dim = spectrum.dim();
  HermitianForm form{Eigen::MatrixXcd::Zero(dim, dim)};
  const auto entries = spectrum.entries();
  const DyadicInterval& arc = square.arc();
  const int bits = arc.rank + 1;
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  const std::uint64_t half = std::uint64_t{1} << arc.rank;

  std::vector<std::uint64_t> residue(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) residue[i] = entries[i].n.low_bits(bits);

  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t m = i; m < entries.size(); ++m) {
      const std::uint64_t res = (residue[i] - residue[m]) & mask;
      const bool same = i == m || entries[i].n == entries[m].n;
      if (!same && (res == 0 || res == half)) continue;  // angular factor vanishes
      const double radial =
          radial_factor(square.width(), (entries[i].n + entries[m].n).to_double());
      if (radial == 0.0) continue;
      std::complex<double> angular;
      if (same) {
        angular = arc.length();
      } else {
        angular = angular_factor(arc, res, signed_difference(entries[i].n, entries[m].n).to_double());
      }
      const std::complex<double> term = entries[i].value * std::conj(entries[m].value) * angular * radial;
      const int p = entries[i].coordinate;
      const int q = entries[m].coordinate;
      form.matrix(p, q) += term;
      if (i != m) form.matrix(q, p) += std::conj(term);
    }
  }
  return form;
}

double largest_eigenvalue(const HermitianForm& form) {
  if (form.matrix.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(form.matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("Hermitian eigen solver failed", std::nan(""));
  }
  return solver.eigenvalues()[form.matrix.rows() - 1];
}

int default_max_rank(int dim) { return std::min(dim + 2, 16); }

IntensityResult carleson_intensity_reference(const VectorSpectrum& spectrum, int max_rank) {
  require_scan_rank(max_rank);
  IntensityResult result;
  result.max_rank = max_rank;
  result.remainder_bound = intensity_remainder_bound(spectrum, max_rank);
  if (spectrum.empty()) return result;
  bool first = true;
  for (int r = 0; r <= max_rank; ++r) {
    const std::int64_t count = std::int64_t{1} << r;
    for (std::int64_t k = 0; k < count; ++k) {
      const DyadicInterval arc{r, k};
      const double value =
          largest_eigenvalue(gram_matrix(CarlesonSquare(arc), spectrum)) / arc.length();
      ++result.arcs_evaluated;
      if (first || value > result.value) {
        result.value = value;
        result.witness = arc;
        first = false;
      }
    }
  }
  return result;
}

double intensity_remainder_bound(const VectorSpectrum& spectrum, int max_rank) {
  require_scan_rank(max_rank);
  const double delta = std::ldexp(1.0, -(max_rank + 1));
  // ||phi(w)||^2 = sum_p |phi_p(w)|^2 and |phi_p(w)| <= sum_{n in p} |hat(n)_p| |w|^n.
  std::vector<std::vector<const SpectrumEntry*>> by_coordinate(spectrum.dim());
  for (const auto& e : spectrum.entries()) by_coordinate[e.coordinate].push_back(&e);
  double total = 0.0;
  for (const auto& list : by_coordinate) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      const double ci = std::abs(list[i]->value);
      total += ci * ci * radial_factor(delta, 2.0 * list[i]->n.to_double());
      for (std::size_t m = i + 1; m < list.size(); ++m) {
        total += 2.0 * ci * std::abs(list[m]->value) *
                 radial_factor(delta, (list[i]->n + list[m]->n).to_double());
      }
    }
  }
  return total;
}

double g_norm_dA1(const DyadicInterval& arc, const WaveletProfile& profile) {
  if (arc.rank < 0 || arc.rank > 40) throw DomainError("g_norm_dA1 rank outside [0, 40]");
  const double len = arc.length();
  const auto lo = static_cast<std::int64_t>(std::ceil(kSupportLow / len));
  const auto hi = static_cast<std::int64_t>(std::floor(kSupportHigh / len));
  double total = 0.0;
  for (std::int64_t n = std::max<std::int64_t>(lo, 1); n <= hi; ++n) {
    const double x = static_cast<double>(n) * len;
    const double amp = 4.0 * std::numbers::pi * x * profile(x);
    const double nn = static_cast<double>(n);
    total += amp * amp / ((nn + 1.0) * (nn + 2.0));
  }
  // n and -n contribute equally.
  return 2.0 * std::numbers::pi * total;
}

}  // namespace carleson
