#include "doctest.h"

#include <cmath>
#include <vector>

#include "carleson/construction.hpp"
#include "carleson/embedding.hpp"
#include "carleson/errors.hpp"
#include "oracles.hpp"

using namespace carleson;
using cd = std::complex<double>;

namespace {

// Element of Z[zeta], zeta = e^{2 pi i / 2^M}, in the basis 1, zeta, ..., zeta^{2^{M-1}-1}
// (zeta^{2^{M-1}} = -1), so equality is exact integer comparison.
std::vector<long long> reduce(const std::vector<long long>& histogram) {
  const std::size_t half = histogram.size() / 2;
  std::vector<long long> out(half);
  for (std::size_t e = 0; e < half; ++e) out[e] = histogram[e] - histogram[e + half];
  return out;
}

// sum_{I1 in D_j1, I2 in D_j2} e^{-2 pi i m (C_I1 - C_I2)} as exponent counts mod 2^M.
std::vector<long long> beta_brute(std::int64_t m, int j1, int j2) {
  const int bits = j1 + j2 + 1;
  const std::int64_t modulus = std::int64_t{1} << bits;
  std::vector<long long> hist(static_cast<std::size_t>(modulus), 0);
  for (std::int64_t k1 = 0; k1 < (std::int64_t{1} << j1); ++k1) {
    for (std::int64_t k2 = 0; k2 < (std::int64_t{1} << j2); ++k2) {
      // C_I = (2k + 1) / 2^{j+1}
      const std::int64_t num = (2 * k1 + 1) * (std::int64_t{1} << j2) - (2 * k2 + 1) * (std::int64_t{1} << j1);
      const std::int64_t e = ((-m * num) % modulus + modulus) % modulus;
      ++hist[static_cast<std::size_t>(e)];
    }
  }
  return reduce(hist);
}

std::vector<long long> beta_closed(std::int64_t m, int j1, int j2) {
  const int bits = j1 + j2 + 1;
  const auto term = beta_sum_exact(m, j1, j2);
  std::vector<long long> hist(std::size_t{1} << bits, 0);
  if (term.magnitude != 0) {
    REQUIRE(term.log2_order <= bits);
    const std::uint64_t e = term.exponent << (bits - term.log2_order);
    hist[e & (hist.size() - 1)] += term.magnitude;
  }
  return reduce(hist);
}

}  // namespace

TEST_SUITE("embedding") {

TEST_CASE("beta examples") {
  CHECK(beta_sum(0, 1, 1) == cd(4.0, 0.0));
  CHECK(beta_sum(1, 1, 1) == cd(0.0, 0.0));
  CHECK(std::abs(beta_sum(2, 1, 1) - cd(4.0, 0.0)) <= 1e-14);
  CHECK(beta_sum(6, 2, 1) == cd(0.0, 0.0));
}

TEST_CASE("beta closed form equals brute force exactly") {
  for (int j1 = 1; j1 <= 6; ++j1) {
    for (int j2 = 1; j2 <= 6; ++j2) {
      for (std::int64_t m = -256; m <= 256; ++m) {
        const bool same = beta_closed(m, j1, j2) == beta_brute(m, j1, j2);
        if (!same) FAIL_CHECK("beta mismatch at m=" << m << " j1=" << j1 << " j2=" << j2);
      }
    }
  }
}

TEST_CASE("beta floating form agrees with the exact form") {
  for (std::int64_t m : {0, 4, 8, 64, -128, 96}) {
    const auto t = beta_sum_exact(m, 2, 3);
    const cd z = static_cast<double>(t.magnitude) *
                 std::polar(1.0, 2.0 * oracle::kPi * static_cast<double>(t.exponent) / std::ldexp(1.0, t.log2_order));
    CHECK(std::abs(beta_sum(m, 2, 3) - z) <= 1e-12);
  }
}

TEST_CASE("unreduced generation sums equal the surviving-term form") {
  for (int j1 = 1; j1 <= 6; ++j1) {
    for (int j2 = 1; j2 <= 6; ++j2) {
      for (int l1 = 0; l1 < j1; ++l1) {
        for (int l2 = 0; l2 < j2; ++l2) {
          const cd full = generation_pair_sum(j1, l1, j2, l2);
          const double reduced = reduced_generation_pair(j1, l1, j2, l2);
          CHECK(std::abs(full - reduced) <= 1e-10 * std::max(1.0, std::abs(reduced)));
        }
      }
    }
  }
}

TEST_CASE("alpha vanishes off the profile support") {
  CHECK(alpha_coefficient(-1, 1, 0, 1, 0) == 0.0);
  CHECK(alpha_coefficient(100, 2, 0, 2, 1) == 0.0);
  CHECK(alpha_coefficient(0, 1, 0, 1, 0) > 0.0);
}

TEST_CASE("spectral route matches direct quadrature, N = 4") {
  const auto phi = phi_spectrum(4);
  auto integrand = [&](double r, double x) {
    const cd w = std::polar(r, 2.0 * oracle::kPi * x);
    cd pairing{0.0, 0.0};
    for (const auto& e : phi.entries()) {
      const cd e_l = std::pow(w, std::ldexp(1.0, e.coordinate));
      pairing += e_l * std::conj(e.value * std::pow(w, e.n.to_double()));
    }
    return std::norm(pairing);
  };
  const double quad = oracle::polar(integrand, 0.0, 0.0, 1.0, 64, 8);
  CHECK(embedding_form_spectral(4) == doctest::Approx(quad).epsilon(1e-4));
}

TEST_CASE("two routes agree") {
  for (int dim = 2; dim <= 256; dim *= 2) {
    const double a = embedding_form_spectral(dim);
    const double b = embedding_form_closed(dim);
    CHECK(a > 0.0);
    CHECK(std::abs(a - b) / std::max(a, b) <= 1e-9);
  }
  for (int dim : {3, 5, 7, 12, 33}) {
    const double a = embedding_form_spectral(dim);
    CHECK(std::abs(a - embedding_form_closed(dim)) / a <= 1e-9);
  }
  for (auto kind : {RampKind::SmoothCinf}) {
    const WaveletProfile p(kind);
    const double a = embedding_form_spectral(16, p);
    CHECK(std::abs(a - embedding_form_closed(16, p)) / a <= 1e-9);
  }
}

TEST_CASE("embedding form properties") {
  const auto e = test_spectrum_E(12);
  const auto phi = phi_spectrum(12);
  const double base = embedding_pairing(e, phi);
  CHECK(embedding_pairing(e, phi.scaled(std::polar(1.0, 0.7))) == doctest::Approx(base).epsilon(1e-13));
  CHECK(base == doctest::Approx(embedding_form_spectral(12)).epsilon(1e-13));
  double prev = 0.0;
  for (int dim = 8; dim <= 256; dim *= 2) {
    const double v = embedding_form_spectral(dim);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(embedding_form_closed(257), DomainError);
  CHECK_THROWS_AS(embedding_form_spectral(1), DomainError);
}

TEST_CASE("ratio lower bound record") {
  const auto a = ratio_lower_bound(8, 10);
  const auto b = ratio_lower_bound(8, 10);
  CHECK(a.value_spectral == b.value_spectral);
  CHECK(a.value_paper == b.value_paper);
  CHECK(a.ratio_lower_bound == b.ratio_lower_bound);
  CHECK(a.intensity.value == b.intensity.value);
  CHECK(a.ratio_lower_bound == doctest::Approx(std::sqrt(a.value_spectral / 8) / a.intensity.value));
  CHECK(a.relative_gap <= 1e-9);
  CHECK_THROWS_AS(ratio_lower_bound(1, 4), DomainError);
}

}
