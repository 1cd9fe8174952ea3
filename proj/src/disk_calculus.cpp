#include "carleson/disk_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "carleson/errors.hpp"

namespace carleson {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 2 / (m (m + 2)) without overflow for huge m.
double inverse_pair_product(double m) {
  if (m < 1e100) return 2.0 / (m * (m + 2.0));
  return 2.0 * std::exp(-std::log(m) - std::log(m + 2.0));
}

template <class F>
auto kronrod(F&& f, double a, double b, double rel_tol, const char* what) {
  using boost::math::quadrature::gauss_kronrod;
  double error = 0.0;
  double l1 = 0.0;
  auto value = gauss_kronrod<double, 15>::integrate(f, a, b, 18, rel_tol, &error, &l1);
  // Near-total cancellation leaves a roundoff floor of ~1e-10 of the L1 norm.
  if (error > std::max(10.0 * rel_tol, 1e-9) * l1 && error > 1e-300) {
    throw NumericError(std::string(what) + ": quadrature did not converge", error / l1);
  }
  return value;
}

// Sorted, deduplicated breakpoints of psi_hat(xi * len) inside [lo, hi].
void add_profile_breaks(std::vector<double>& pts, double len, double lo, double hi) {
  for (double b : {1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0}) {
    const double x = b / len;
    if (x > lo && x < hi) pts.push_back(x);
  }
}

}  // namespace

CarlesonSquare::CarlesonSquare(DyadicInterval arc) : arc_(arc) {
  if (!arc_.is_arc()) throw DomainError("Carleson square needs a dyadic arc of rank <= 62");
}

double radial_factor(double width, double power) {
  if (!(width > 0.0 && width <= 1.0)) throw DomainError("radial_factor width outside (0, 1]");
  if (!(power >= 0.0)) throw DomainError("radial_factor power must be >= 0");
  const double m = power + 2.0;
  if (width == 1.0) return kTwoPi * inverse_pair_product(m);
  const double lambda = std::log1p(-width);  // log of inner radius, negative
  const double mu = m * lambda;
  if (-mu >= 0.25) {
    // int = [2(1 - q) - q m (1 - r0^2)] / (m (m+2)),  q = r0^m.
    const double q = std::exp(mu);
    const double tail = q == 0.0 ? 0.0 : q * (-m * std::expm1(2.0 * lambda));
    const double numerator = -2.0 * std::expm1(mu) - tail;
    return kTwoPi * 0.5 * numerator * inverse_pair_product(m);
  }
  // Thin band: substitute r = e^t and integrate the entire function directly.
  auto integrand = [m](double t) { return std::exp(m * t) * (-std::expm1(2.0 * t)); };
  return kTwoPi * boost::math::quadrature::gauss<double, 20>::integrate(integrand, lambda, 0.0);
}

std::complex<double> angular_factor(const DyadicInterval& arc, std::uint64_t residue, double freq) {
  const int r = arc.rank;
  if (residue == 0 && freq == 0.0) return {arc.length(), 0.0};
  // int_I e^{2 pi i d x} dx = e^{i pi d (2k+1) / 2^r} sin(pi d / 2^r) / (pi d).
  const int bits = r + 1;
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  residue &= mask;
  const std::uint64_t half = std::uint64_t{1} << r;
  if (residue == 0 || residue == half) return {0.0, 0.0};
  // Centered residue in (-2^r, 2^r) for an accurate sine.
  const double centered = residue < half ? static_cast<double>(residue)
                                         : -static_cast<double>((std::uint64_t{1} << bits) - residue);
  const double sine = std::sin(kPi * std::ldexp(centered, -r));
  const std::uint64_t odd = static_cast<std::uint64_t>(2 * arc.index + 1);
  const std::complex<double> phase = root_of_unity(residue * odd, bits);
  return phase * (sine / (kPi * freq));
}

std::complex<double> angular_factor(const DyadicInterval& arc, const SignedIndex& freq) {
  if (freq.is_zero()) return {arc.length(), 0.0};
  return angular_factor(arc, freq.residue(arc.rank + 1), freq.to_double());
}

std::complex<double> carleson_moment(const CarlesonSquare& square, const TaylorIndex& radial_power,
                                     const SignedIndex& angular_freq) {
  const std::complex<double> ang = angular_factor(square.arc(), angular_freq);
  if (ang == 0.0) return {0.0, 0.0};
  return ang * radial_factor(square.width(), radial_power.to_double());
}

std::complex<double> moment_carleson_square(const CarlesonSquare& square, const TaylorIndex& a,
                                            const TaylorIndex& b) {
  return carleson_moment(square, a + b, signed_difference(a, b));
}

std::complex<double> moment_carleson_square(const CarlesonSquare& square, std::int64_t a,
                                            std::int64_t b) {
  if (a < 0 || b < 0) throw DomainError("moment exponents must be nonnegative");
  return moment_carleson_square(square, TaylorIndex(static_cast<std::uint64_t>(a)),
                                TaylorIndex(static_cast<std::uint64_t>(b)));
}

double moment_disk(const TaylorIndex& a, const TaylorIndex& b) {
  if (a != b) return 0.0;
  const double x = a.to_double();
  if (x > 1e15) return std::exp(std::log(kPi) - std::log1p(x) - std::log(x + 2.0));
  return kPi / ((x + 1.0) * (x + 2.0));
}

double moment_disk(std::int64_t a, std::int64_t b) {
  if (a < 0 || b < 0) throw DomainError("moment exponents must be nonnegative");
  return moment_disk(TaylorIndex(static_cast<std::uint64_t>(a)),
                     TaylorIndex(static_cast<std::uint64_t>(b)));
}

double halfplane_lp_pairing(const DyadicInterval& first, const DyadicInterval& second,
                            const WaveletProfile& profile) {
  const double len_i = first.length();
  const double len_j = second.length();
  const double lo = std::max(kSupportLow / len_i, kSupportLow / len_j);
  const double hi = std::min(kSupportHigh / len_i, kSupportHigh / len_j);
  if (!(lo < hi)) return 0.0;  // disjoint dilation supports

  const double shift = first.center() - second.center();
  // f_I^ conj(f_J^) / (16 pi^2 xi^2) = |I||J| psi(|I| xi) psi(|J| xi) e^{-2 pi i xi (C_I - C_J)}
  auto positive = [&](double xi) {
    const double amp = len_i * len_j * profile(xi * len_i) * profile(xi * len_j);
    return std::polar(amp, -kTwoPi * xi * shift);
  };
  auto negative = [&](double t) {  // xi = -t
    const double amp = len_i * len_j * profile(t * len_i) * profile(t * len_j);
    return std::polar(amp, kTwoPi * t * shift);
  };

  std::vector<double> pts{lo, hi};
  add_profile_breaks(pts, len_i, lo, hi);
  add_profile_breaks(pts, len_j, lo, hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::complex<double> total{0.0, 0.0};
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    total += kronrod(positive, pts[s], pts[s + 1], 1e-10, "halfplane_lp_pairing");
    total += kronrod(negative, pts[s], pts[s + 1], 1e-10, "halfplane_lp_pairing");
  }
  const double scale = std::sqrt(len_i * len_j);
  if (std::abs(total.imag()) > 1e-10 * scale) {
    throw NumericError("halfplane_lp_pairing: imaginary residue too large",
                       std::abs(total.imag()) / scale);
  }
  return total.real();
}

std::complex<double> eval_f_poisson(const DyadicInterval& interval, double x, double y,
                                    const WaveletProfile& profile) {
  if (!(y > 0.0)) throw DomainError("eval_f_poisson requires y > 0");
  const double len = interval.length();
  const double offset = x - interval.center();
  // f_I^(xi) e^{-2 pi |xi| y} e^{2 pi i x xi}, f_I^(xi) = 4 pi |xi| |I| psi(|xi| |I|) e^{-2 pi i xi C_I}
  auto positive = [&](double xi) {
    const double amp = 4.0 * kPi * xi * len * profile(xi * len) * std::exp(-kTwoPi * xi * y);
    return std::polar(amp, kTwoPi * xi * offset);
  };
  auto negative = [&](double t) {
    const double amp = 4.0 * kPi * t * len * profile(t * len) * std::exp(-kTwoPi * t * y);
    return std::polar(amp, -kTwoPi * t * offset);
  };
  const double a = kSupportLow / len;
  const double mid = (2.0 / 3.0) / len;
  const double b = kSupportHigh / len;
  std::complex<double> total{0.0, 0.0};
  for (auto [lo, hi] : {std::pair{a, mid}, std::pair{mid, b}}) {
    total += kronrod(positive, lo, hi, 1e-11, "eval_f_poisson");
    total += kronrod(negative, lo, hi, 1e-11, "eval_f_poisson");
  }
  return total;
}

}  // namespace carleson
