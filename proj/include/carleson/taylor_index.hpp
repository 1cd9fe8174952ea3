#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace carleson {

/// Exact nonnegative integer below 2^320, used for Taylor indices n = 2^j + 2^l
/// that outgrow 64-bit and double-exact ranges once j > 52.
class TaylorIndex {
 public:
  static constexpr int kWords = 5;
  static constexpr int kBits = 64 * kWords;

  constexpr TaylorIndex() = default;
  constexpr explicit TaylorIndex(std::uint64_t value) : words_{value, 0, 0, 0, 0} {}

  static TaylorIndex pow2(int exponent);
  static TaylorIndex parse(std::string_view decimal);

  TaylorIndex& operator+=(const TaylorIndex& other);
  // Throws DomainError on underflow.
  TaylorIndex& operator-=(const TaylorIndex& other);

  friend TaylorIndex operator+(TaylorIndex a, const TaylorIndex& b) { return a += b; }
  friend TaylorIndex operator-(TaylorIndex a, const TaylorIndex& b) { return a -= b; }

  friend std::strong_ordering operator<=>(const TaylorIndex& a, const TaylorIndex& b);
  friend bool operator==(const TaylorIndex& a, const TaylorIndex& b) = default;

  bool is_zero() const;
  int bit_width() const;
  // value mod 2^bits, bits in [0, 64].
  std::uint64_t low_bits(int bits) const;
  // Nearest double (round-to-nearest on the top 64 significant bits).
  double to_double() const;
  std::string to_string() const;

 private:
  std::array<std::uint64_t, kWords> words_{};
};

/// n = 2^{j-1} when l == j-1, otherwise 2^j + 2^l (0 <= l <= j-2).
TaylorIndex index_from_provenance(int generation, int offset);

/// Signed difference a - b, kept as sign plus exact magnitude.
struct SignedIndex {
  bool negative = false;
  TaylorIndex magnitude;

  bool is_zero() const { return magnitude.is_zero(); }
  double to_double() const { return negative ? -magnitude.to_double() : magnitude.to_double(); }
  // value mod 2^bits as an element of [0, 2^bits), bits <= 64.
  std::uint64_t residue(int bits) const;
};

SignedIndex signed_difference(const TaylorIndex& a, const TaylorIndex& b);

}  // namespace carleson
