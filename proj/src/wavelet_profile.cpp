#include "carleson/wavelet_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "carleson/errors.hpp"

namespace carleson {

RampKind parse_ramp_kind(std::string_view name) {
  if (name == "polynomial" || name == "polynomial-C3" || name == "poly") return RampKind::PolynomialC3;
  if (name == "smooth" || name == "smooth-Cinf") return RampKind::SmoothCinf;
  throw DomainError("unknown ramp kind '" + std::string(name) + "'");
}

std::string_view to_string(RampKind kind) {
  return kind == RampKind::PolynomialC3 ? "polynomial-C3" : "smooth-Cinf";
}

double Ramp::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("ramp argument outside [0,1]: " + std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  switch (kind_) {
    case RampKind::PolynomialC3:
      return x * x * x * x * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x)));
    case RampKind::SmoothCinf: {
      const double left = std::exp(-1.0 / x);
      const double right = std::exp(-1.0 / (1.0 - x));
      return left / (left + right);
    }
  }
  return 0.0;
}

double WaveletProfile::operator()(double xi) const {
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  const double x = std::abs(xi);
  if (!(x > kSupportLow && x < kSupportHigh)) return 0.0;
  if (x <= 2.0 / 3.0) {
    return std::sin(kHalfPi * ramp_(std::clamp(3.0 * x - 1.0, 0.0, 1.0)));
  }
  return std::cos(kHalfPi * ramp_(std::clamp(1.5 * x - 1.0, 0.0, 1.0)));
}

double eval_nu(const Ramp& ramp, double x) { return ramp(x); }

double eval_psi_hat(const WaveletProfile& profile, double xi) { return profile(xi); }

}  // namespace carleson
