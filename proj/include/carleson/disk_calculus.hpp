#pragma once

#include <complex>
#include <cstdint>

#include "carleson/dyadic.hpp"
#include "carleson/taylor_index.hpp"
#include "carleson/wavelet_profile.hpp"

namespace carleson {

/// Q_I = { w : w/|w| in I, 1 - |I| < |w| < 1 } for a dyadic arc I.
/// Rank 0 is the whole disk (the excluded centre is a null set).
class CarlesonSquare {
 public:
  explicit CarlesonSquare(DyadicInterval arc);

  const DyadicInterval& arc() const noexcept { return arc_; }
  double width() const { return arc_.length(); }
  double inner_radius() const { return 1.0 - width(); }

 private:
  DyadicInterval arc_;
};

// Area measure convention: dA = 2 pi r dr dx, x in [0,1). dA_1 = (1 - r^2) dA.

/// 2 pi int_{1-width}^{1} r^{power+1} (1 - r^2) dr, width in (0, 1].
/// Stable for power up to ~1e300 (log space) and for width down to 2^-62.
double radial_factor(double width, double power);

/// int_I e^{2 pi i d x} dx for an arc I and signed integer frequency d.
std::complex<double> angular_factor(const DyadicInterval& arc, const SignedIndex& freq);

/// Same, with d supplied as its residue mod 2^{rank+1} and its (rounded) value.
std::complex<double> angular_factor(const DyadicInterval& arc, std::uint64_t residue,
                                    double freq);

/// int_Q r^s e^{2 pi i d x} dA_1.
std::complex<double> carleson_moment(const CarlesonSquare& square, const TaylorIndex& radial_power,
                                     const SignedIndex& angular_freq);

/// int_Q w^a conj(w)^b dA_1.
std::complex<double> moment_carleson_square(const CarlesonSquare& square, const TaylorIndex& a,
                                            const TaylorIndex& b);
std::complex<double> moment_carleson_square(const CarlesonSquare& square, std::int64_t a,
                                            std::int64_t b);

/// int_D w^a conj(w)^b dA_1 = delta_ab pi / ((a+1)(a+2)).
double moment_disk(const TaylorIndex& a, const TaylorIndex& b);
double moment_disk(std::int64_t a, std::int64_t b);

/// int_{C_+} f_I conj(f_J) y dx dy, evaluated on the Fourier side as
/// int f_I^(xi) conj(f_J^(xi)) / (16 pi^2 xi^2) dxi by adaptive Gauss-Kronrod.
double halfplane_lp_pairing(const DyadicInterval& first, const DyadicInterval& second,
                            const WaveletProfile& profile = WaveletProfile{});

/// Poisson extension of f_I = |I|^{1/2} D psi_I at x + iy, y > 0.
std::complex<double> eval_f_poisson(const DyadicInterval& interval, double x, double y,
                                    const WaveletProfile& profile = WaveletProfile{});

}  // namespace carleson
