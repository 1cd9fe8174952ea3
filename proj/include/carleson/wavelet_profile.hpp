#pragma once

#include <string_view>

namespace carleson {

enum class RampKind { PolynomialC3, SmoothCinf };

RampKind parse_ramp_kind(std::string_view name);
std::string_view to_string(RampKind kind);

/// Transition function nu: [0,1] -> [0,1] with nu(x) + nu(1-x) = 1.
///
/// PolynomialC3 is x^4 (35 - 84x + 70x^2 - 20x^3). SmoothCinf is
/// s(x) / (s(x) + s(1-x)) with s(x) = exp(-1/x), flat to all orders at both ends.
class Ramp {
 public:
  constexpr Ramp() = default;
  constexpr explicit Ramp(RampKind kind) : kind_(kind) {}

  RampKind kind() const noexcept { return kind_; }

  // Throws DomainError when x is outside [0,1] (NaN included).
  double operator()(double x) const;

 private:
  RampKind kind_ = RampKind::PolynomialC3;
};

/// Even, nonnegative band-limited profile psi_hat, supported on
/// [-4/3,-1/3] u [1/3,4/3]:
///   sin(pi/2 nu(3|xi| - 1))     on [1/3, 2/3]
///   cos(pi/2 nu(3|xi|/2 - 1))   on [2/3, 4/3]
/// Values outside the support are exactly zero.
class WaveletProfile {
 public:
  constexpr WaveletProfile() = default;
  constexpr explicit WaveletProfile(Ramp ramp) : ramp_(ramp) {}
  constexpr explicit WaveletProfile(RampKind kind) : ramp_(kind) {}

  const Ramp& ramp() const noexcept { return ramp_; }

  double operator()(double xi) const;

 private:
  Ramp ramp_;
};

double eval_nu(const Ramp& ramp, double x);
double eval_psi_hat(const WaveletProfile& profile, double xi);

inline constexpr double kSupportLow = 1.0 / 3.0;
inline constexpr double kSupportHigh = 4.0 / 3.0;

}  // namespace carleson
