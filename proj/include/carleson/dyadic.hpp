#pragma once

#include <complex>
#include <compare>
#include <cstdint>

namespace carleson {

/// Dyadic interval [k 2^-j, (k+1) 2^-j). Arcs of the circle have 0 <= k < 2^j;
/// line intervals may carry any signed index.
struct DyadicInterval {
  int rank = 0;
  std::int64_t index = 0;

  double length() const;
  double left() const;
  double right() const;
  double center() const;

  bool is_arc() const;

  friend auto operator<=>(const DyadicInterval&, const DyadicInterval&) = default;
};

inline constexpr int kMaxArcRank = 62;

/// |n| where n is the unique integer with `smaller` contained in larger + n|larger|.
/// Throws PreconditionError if |smaller| > |larger|.
std::int64_t relative_distance(const DyadicInterval& smaller, const DyadicInterval& larger);

/// Same as relative_distance but measured on the circle (shifts taken mod 1).
std::int64_t circular_relative_distance(const DyadicInterval& smaller, const DyadicInterval& larger);

/// e^{2 pi i residue / 2^log2_modulus}; residue is reduced mod 2^log2_modulus first.
std::complex<double> root_of_unity(std::uint64_t residue, int log2_modulus);

/// Residue of numerator mod 2^bits for a signed numerator (bits <= 63).
std::uint64_t mod_pow2(std::int64_t numerator, int bits);

}  // namespace carleson
