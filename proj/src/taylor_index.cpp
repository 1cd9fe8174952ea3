#include "carleson/taylor_index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "carleson/errors.hpp"

namespace carleson {

TaylorIndex TaylorIndex::pow2(int exponent) {
  if (exponent < 0 || exponent >= kBits) {
    throw DomainError("TaylorIndex::pow2 exponent out of range: " + std::to_string(exponent));
  }
  TaylorIndex out;
  out.words_[static_cast<std::size_t>(exponent / 64)] = std::uint64_t{1} << (exponent % 64);
  return out;
}

TaylorIndex TaylorIndex::parse(std::string_view decimal) {
  if (decimal.empty()) throw DomainError("empty TaylorIndex literal");
  TaylorIndex out;
  for (char c : decimal) {
    if (c < '0' || c > '9') throw DomainError("invalid digit in TaylorIndex literal");
    unsigned __int128 carry = static_cast<unsigned>(c - '0');
    for (auto& w : out.words_) {
      const unsigned __int128 v = static_cast<unsigned __int128>(w) * 10u + carry;
      w = static_cast<std::uint64_t>(v);
      carry = v >> 64;
    }
    if (carry != 0) throw DomainError("TaylorIndex literal overflows 320 bits");
  }
  return out;
}

TaylorIndex& TaylorIndex::operator+=(const TaylorIndex& other) {
  unsigned carry = 0;
  for (int i = 0; i < kWords; ++i) {
    const std::uint64_t a = words_[i];
    const std::uint64_t s = a + other.words_[i];
    const std::uint64_t t = s + carry;
    carry = static_cast<unsigned>(s < a) + static_cast<unsigned>(t < s);
    words_[i] = t;
  }
  if (carry != 0) throw DomainError("TaylorIndex addition overflows 320 bits");
  return *this;
}

TaylorIndex& TaylorIndex::operator-=(const TaylorIndex& other) {
  if (*this < other) throw DomainError("TaylorIndex subtraction underflow");
  unsigned borrow = 0;
  for (int i = 0; i < kWords; ++i) {
    const std::uint64_t a = words_[i];
    const std::uint64_t d = a - other.words_[i];
    const std::uint64_t t = d - borrow;
    borrow = static_cast<unsigned>(a < other.words_[i]) + static_cast<unsigned>(d < borrow);
    words_[i] = t;
  }
  return *this;
}

std::strong_ordering operator<=>(const TaylorIndex& a, const TaylorIndex& b) {
  for (int i = TaylorIndex::kWords - 1; i >= 0; --i) {
    if (a.words_[i] != b.words_[i]) return a.words_[i] <=> b.words_[i];
  }
  return std::strong_ordering::equal;
}

bool TaylorIndex::is_zero() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

int TaylorIndex::bit_width() const {
  for (int i = kWords - 1; i >= 0; --i) {
    if (words_[i] != 0) return 64 * i + static_cast<int>(std::bit_width(words_[i]));
  }
  return 0;
}

std::uint64_t TaylorIndex::low_bits(int bits) const {
  if (bits <= 0) return 0;
  if (bits >= 64) return words_[0];
  return words_[0] & ((std::uint64_t{1} << bits) - 1);
}

double TaylorIndex::to_double() const {
  const int width = bit_width();
  if (width <= 64) return static_cast<double>(words_[0]);
  // Gather the top 64 bits plus a sticky bit so the conversion rounds correctly.
  const int shift = width - 64;
  const int word = shift / 64;
  const int bit = shift % 64;
  std::uint64_t top = words_[word] >> bit;
  if (bit != 0 && word + 1 < kWords) top |= words_[word + 1] << (64 - bit);
  bool sticky = bit != 0 && (words_[word] & ((std::uint64_t{1} << bit) - 1)) != 0;
  for (int i = 0; i < word && !sticky; ++i) sticky = words_[i] != 0;
  if (sticky) top |= 1;  // top has 64 significant bits; bit 0 only matters for ties
  return std::ldexp(static_cast<double>(top), shift);
}

std::string TaylorIndex::to_string() const {
  if (is_zero()) return "0";
  auto words = words_;
  std::string digits;
  auto nonzero = [&] {
    return std::any_of(words.begin(), words.end(), [](std::uint64_t w) { return w != 0; });
  };
  while (nonzero()) {
    unsigned __int128 rem = 0;
    for (int i = kWords - 1; i >= 0; --i) {
      const unsigned __int128 cur = (rem << 64) | words[i];
      words[i] = static_cast<std::uint64_t>(cur / 10u);
      rem = cur % 10u;
    }
    digits.push_back(static_cast<char>('0' + static_cast<int>(rem)));
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

TaylorIndex index_from_provenance(int generation, int offset) {
  if (generation < 1 || offset < 0 || offset > generation - 1) {
    throw DomainError("invalid (j,l) provenance");
  }
  if (offset == generation - 1) return TaylorIndex::pow2(generation - 1);
  return TaylorIndex::pow2(generation) + TaylorIndex::pow2(offset);
}

std::uint64_t SignedIndex::residue(int bits) const {
  const std::uint64_t mask = bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
  const std::uint64_t low = magnitude.low_bits(64);
  return (negative ? (0 - low) : low) & mask;
}

SignedIndex signed_difference(const TaylorIndex& a, const TaylorIndex& b) {
  if (a < b) return {true, b - a};
  return {false, a - b};
}

}  // namespace carleson
