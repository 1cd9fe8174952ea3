#include "doctest.h"

#include <cmath>
#include <random>

#include "carleson/arc_scan.hpp"
#include "carleson/construction.hpp"
#include "carleson/errors.hpp"
#include "carleson/measure.hpp"
#include "oracles.hpp"

using namespace carleson;
using cd = std::complex<double>;

namespace {

Eigen::VectorXcd evaluate(const VectorSpectrum& s, cd w) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(s.dim());
  for (const auto& e : s.entries()) v[e.coordinate] += e.value * std::pow(w, e.n.to_double());
  return v;
}

// mu(Q_I) by tensor Gauss-Legendre over the square.
Eigen::MatrixXcd gram_quadrature(const VectorSpectrum& s, const DyadicInterval& arc, int order) {
  const auto [x, w] = oracle::gauss_legendre(order);
  const double r0 = 1.0 - arc.length();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(s.dim(), s.dim());
  for (int i = 0; i < order; ++i) {
    const double r = r0 + 0.5 * (1.0 - r0) * (x[i] + 1.0);
    const double wr = 0.5 * (1.0 - r0) * w[i] * (1.0 - r * r) * 2.0 * oracle::kPi * r;
    for (int k = 0; k < order; ++k) {
      const double t = arc.left() + 0.5 * arc.length() * (x[k] + 1.0);
      const double wt = 0.5 * arc.length() * w[k];
      const auto v = evaluate(s, std::polar(r, 2.0 * oracle::kPi * t));
      m += (wr * wt) * v * v.adjoint();
    }
  }
  return m;
}

Eigen::MatrixXcd random_psd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  return a * a.adjoint();
}

}  // namespace

TEST_SUITE("measure") {

TEST_CASE("largest eigenvalue") {
  CHECK(largest_eigenvalue({Eigen::MatrixXcd::Identity(5, 5)}) == doctest::Approx(1.0));
  Eigen::VectorXcd v(3);
  v << cd(1, 2), cd(0, -1), cd(3, 0);
  CHECK(largest_eigenvalue({v * v.adjoint()}) == doctest::Approx(v.squaredNorm()).epsilon(1e-14));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto m = random_psd(8, rng);
    CHECK(largest_eigenvalue({m}) == doctest::Approx(oracle::charpoly_largest_root(m)).epsilon(1e-8));
  }
}

TEST_CASE("gram matrix is Hermitian, PSD and matches quadrature") {
  const auto s = phi_spectrum(4);
  for (const DyadicInterval arc : {DyadicInterval{0, 0}, DyadicInterval{1, 1}, DyadicInterval{3, 2}}) {
    const auto m = gram_matrix(CarlesonSquare(arc), s).matrix;
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * m.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    CHECK(es.eigenvalues()[0] >= -1e-10 * m.trace().real());
    const auto q = gram_quadrature(s, arc, 128);
    CHECK((m - q).cwiseAbs().maxCoeff() <= 1e-8 * m.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("gram matrix on the full disk collapses to the diagonal in n") {
  const auto s = phi_spectrum(6);
  const auto m = gram_matrix(CarlesonSquare({0, 0}), s).matrix;
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(6, 6);
  for (const auto& n : s.support()) {
    const auto v = s.at(n);
    const double x = n.to_double();
    expected += v * v.adjoint() * (oracle::kPi / ((x + 1) * (x + 2)));
  }
  CHECK((m - expected).cwiseAbs().maxCoeff() <= 1e-12 * expected.cwiseAbs().maxCoeff());
  const double trace_quad = gram_quadrature(phi_spectrum(4), {0, 0}, 128).trace().real();
  const double trace = gram_matrix(CarlesonSquare({0, 0}), phi_spectrum(4)).matrix.trace().real();
  CHECK(trace == doctest::Approx(trace_quad).epsilon(1e-6));
}

TEST_CASE("gram forms shrink on nested squares") {
  const auto s = phi_spectrum(5);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXcd e(5);
    for (int i = 0; i < 5; ++i) e[i] = {g(rng), g(rng)};
    e.normalize();
    double prev = std::numeric_limits<double>::infinity();
    for (int r = 0; r <= 6; ++r) {
      const auto m = gram_matrix(CarlesonSquare({r, 0}), s).matrix;
      const double value = e.dot(m * e).real();
      CHECK(value >= -1e-14);
      CHECK(value <= prev * (1 + 1e-12));
      prev = value;
    }
  }
}

TEST_CASE("g_I norm matches quadrature of its truncated Fourier series") {
  for (const DyadicInterval arc : {DyadicInterval{0, 0}, DyadicInterval{1, 1}, DyadicInterval{2, 1},
                                   DyadicInterval{3, 6}}) {
    const auto hi = static_cast<std::int64_t>(std::floor(4.0 / 3.0 / arc.length()));
    auto g = [&](double r, double x) {
      cd value{0.0, 0.0};
      for (std::int64_t n = 1; n <= hi; ++n) {
        const cd z = std::polar(std::pow(r, static_cast<double>(n)), 2.0 * oracle::kPi * n * x);
        value += g_hat_coefficient(arc, n) * z + g_hat_coefficient(arc, -n) * std::conj(z);
      }
      return std::norm(value);
    };
    const double quad = oracle::polar(g, 0.0, 0.0, 1.0, 32, 4);
    CHECK(g_norm_dA1(arc) == doctest::Approx(quad).epsilon(1e-6));
    CHECK(g_norm_dA1(arc) > 0.0);
  }
}

TEST_CASE("intensity: zero spectrum") {
  const VectorSpectrum zero(3, {});
  CHECK(carleson_intensity_reference(zero, 4).value == 0.0);
  CHECK(carleson_intensity(zero, 4).value == 0.0);
}

TEST_CASE("intensity: fast scan agrees with the serial reference") {
  for (int dim : {2, 4, 6, 8}) {
    const auto s = phi_spectrum(dim);
    for (int rank : {0, 3, dim + 2}) {
      const auto ref = carleson_intensity_reference(s, rank);
      for (bool bounds : {true, false}) {
        ScanOptions opt;
        opt.use_bounds = bounds;
        const auto fast = carleson_intensity(s, rank, opt);
        CHECK(fast.value == doctest::Approx(ref.value).epsilon(1e-12));
        CHECK(fast.witness.rank <= rank);
        CHECK(fast.remainder_bound == doctest::Approx(ref.remainder_bound).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("intensity: rank kernel reproduces dense gram matrices") {
  const auto s = phi_spectrum(10);
  for (int rank : {1, 4, 7}) {
    const RankKernel kernel(s, rank);
    for (std::int64_t k : {std::int64_t{0}, std::int64_t{1}, (std::int64_t{1} << rank) - 1}) {
      const DyadicInterval arc{rank, k};
      const Eigen::MatrixXcd dense = gram_matrix(CarlesonSquare(arc), s).matrix / arc.length();
      CHECK((kernel.dense(k) - dense).cwiseAbs().maxCoeff() <= 1e-12 * dense.cwiseAbs().maxCoeff());
      CHECK(kernel.largest(k).value == doctest::Approx(largest_eigenvalue({dense})).epsilon(1e-11));
    }
  }
}

TEST_CASE("intensity: quadrature and vector-net oracle, N = 4") {
  const auto s = phi_spectrum(4);
  std::vector<Eigen::VectorXcd> net;
  for (int l = 0; l < 4; ++l) net.push_back(Eigen::VectorXcd::Unit(4, l));
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  while (net.size() < 64) {
    Eigen::VectorXcd e(4);
    for (int i = 0; i < 4; ++i) e[i] = {g(rng), g(rng)};
    net.push_back(e.normalized());
  }
  double oracle_value = 0.0;
  for (int r = 0; r <= 8; ++r) {
    for (std::int64_t k = 0; k < (std::int64_t{1} << r); ++k) {
      const DyadicInterval arc{r, k};
      const auto m = gram_quadrature(s, arc, 48);
      for (const auto& e : net) oracle_value = std::max(oracle_value, e.dot(m * e).real() / arc.length());
    }
  }
  const auto scan = carleson_intensity(s, 8);
  CHECK(scan.value >= oracle_value * (1 - 1e-9));
  CHECK(scan.value <= oracle_value * 1.05);
}

TEST_CASE("intensity: monotone in max_rank, remainder shrinking") {
  const auto s = phi_spectrum(8);
  double prev_value = 0.0;
  double prev_bound = std::numeric_limits<double>::infinity();
  for (int rank = 0; rank <= 12; ++rank) {
    const auto r = carleson_intensity(s, rank);
    CHECK(r.value >= prev_value);
    CHECK(r.remainder_bound <= prev_bound);
    prev_value = r.value;
    prev_bound = r.remainder_bound;
  }
}

TEST_CASE("intensity regression values") {
  // Frozen from the first run, cross-checked against the serial reference.
  CHECK(carleson_intensity(phi_spectrum(6), 9).value == doctest::Approx(145.6457575670).epsilon(1e-10));
  const auto r8 = carleson_intensity(phi_spectrum(8), 10);
  CHECK(r8.value == doctest::Approx(155.52886874).epsilon(1e-9));
  CHECK(r8.witness.rank >= 1);
  CHECK(r8.pruned_mass == 0.0);
  for (int dim : {16, 32}) CHECK(carleson_intensity(phi_spectrum(dim), default_max_rank(dim)).witness.rank >= 1);
}

TEST_CASE("intensity: thread count does not change the result") {
  const auto s = phi_spectrum(24);
  ScanOptions one;
  one.threads = 1;
  ScanOptions many;
  many.threads = 4;
  const auto a = carleson_intensity(s, 12, one);
  const auto b = carleson_intensity(s, 12, many);
  CHECK(a.value == b.value);
  CHECK(a.witness == b.witness);
}

TEST_CASE("intensity rejects bad ranks") {
  CHECK_THROWS_AS(carleson_intensity(phi_spectrum(4), -1), DomainError);
  CHECK_THROWS_AS(carleson_intensity_reference(phi_spectrum(4), kMaxScanRank + 1), DomainError);
  CHECK(default_max_rank(8) == 10);
  CHECK(default_max_rank(256) == 16);
}

}
