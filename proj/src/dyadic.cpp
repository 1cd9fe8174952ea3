#include "carleson/dyadic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "carleson/errors.hpp"

namespace carleson {

double DyadicInterval::length() const { return std::ldexp(1.0, -rank); }
double DyadicInterval::left() const { return std::ldexp(static_cast<double>(index), -rank); }
double DyadicInterval::right() const { return std::ldexp(static_cast<double>(index) + 1.0, -rank); }
double DyadicInterval::center() const {
  return std::ldexp(static_cast<double>(index) + 0.5, -rank);
}

bool DyadicInterval::is_arc() const {
  return rank >= 0 && rank <= kMaxArcRank && index >= 0 && index < (std::int64_t{1} << rank);
}

std::int64_t relative_distance(const DyadicInterval& smaller, const DyadicInterval& larger) {
  if (smaller.rank < larger.rank) {
    throw PreconditionError("relative_distance requires |I| <= |J|");
  }
  const int shift = smaller.rank - larger.rank;
  // floor(k_I / 2^shift) is the index of the ancestor of I at J's rank.
  const std::int64_t ancestor = shift >= 63 ? (smaller.index < 0 ? -1 : 0) : (smaller.index >> shift);
  const std::int64_t n = ancestor - larger.index;
  return n < 0 ? -n : n;
}

std::int64_t circular_relative_distance(const DyadicInterval& smaller,
                                        const DyadicInterval& larger) {
  const std::int64_t linear = relative_distance(smaller, larger);
  if (larger.rank < 0 || larger.rank > kMaxArcRank) return linear;
  const std::int64_t period = std::int64_t{1} << larger.rank;
  const std::int64_t wrapped = linear % period;
  return std::min(wrapped, period - wrapped);
}

std::uint64_t mod_pow2(std::int64_t numerator, int bits) {
  const std::uint64_t mask = bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
  // Two's complement wrap is exact modulo 2^64, hence modulo 2^bits.
  return static_cast<std::uint64_t>(numerator) & mask;
}

std::complex<double> root_of_unity(std::uint64_t residue, int log2_modulus) {
  if (log2_modulus <= 0) return {1.0, 0.0};
  if (log2_modulus > 63) throw DomainError("root_of_unity modulus above 2^63");
  const std::uint64_t modulus = std::uint64_t{1} << log2_modulus;
  residue &= modulus - 1;
  if (residue == 0) return {1.0, 0.0};
  // Quarter-turn reduction keeps the argument of sin/cos in [-pi/4, pi/4] when possible.
  if (log2_modulus >= 2) {
    const std::uint64_t quarter = modulus >> 2;
    const std::uint64_t turns = (residue + quarter / 2) / quarter;  // nearest quarter turn
    // |residue - turns*quarter| <= quarter/2, so the wrapped difference is exact as int64.
    const auto diff = static_cast<std::int64_t>(residue - turns * quarter);
    const double rest = std::ldexp(static_cast<double>(diff), -log2_modulus);
    const double angle = 2.0 * std::numbers::pi * rest;
    const std::complex<double> base(std::cos(angle), std::sin(angle));
    switch (turns & 3) {
      case 0: return base;
      case 1: return {-base.imag(), base.real()};
      case 2: return {-base.real(), -base.imag()};
      default: return {base.imag(), -base.real()};
    }
  }
  return {-1.0, 0.0};  // modulus 2, residue 1
}

}  // namespace carleson
