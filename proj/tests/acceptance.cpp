// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "carleson/cli.hpp"
#include "carleson/construction.hpp"
#include "carleson/disk_calculus.hpp"
#include "carleson/embedding.hpp"
#include "carleson/verify.hpp"
#include "carleson/wavelet_profile.hpp"
#include "oracles.hpp"

using namespace carleson;
using cd = std::complex<double>;

namespace {

struct Outcome {
  bool pass;
  std::string summary;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

Outcome ac1_partitions() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (auto kind : {RampKind::PolynomialC3, RampKind::SmoothCinf}) {
    const WaveletProfile p(kind);
    for (int i = 1; i <= 10000; ++i) {
      const double xi = i / 10001.0;
      double shift = 0.0;
      for (int k = -3; k <= 3; ++k) shift += p(xi + k) * p(xi + k);
      const double eta = 1.0 / 3.0 + xi;  // one dyadic period [1/3, 4/3)
      double dilate = 0.0;
      for (int j = -6; j <= 6; ++j) dilate += std::pow(p(std::ldexp(eta, j)), 2);
      worst = std::max({worst, std::abs(shift - 1.0), std::abs(dilate - 1.0)});
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-12 && t < 1.0, fmt("max error %.3g (<= 1e-12), %.3f s (< 1 s)", worst, t)};
}

Outcome ac2_littlewood_paley() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto report = check_littlewood_paley(5, 4, Thresholds{});
  const double t = seconds_since(t0);
  return {report.witnessed <= 1e-6 && t < 30.0,
          fmt("max |pairing - |I|delta|/|I| = %.3g (<= 1e-6) over %lld pairs, %.2f s (< 30 s)",
              report.witnessed, report.details[0]["pairs"].get<long long>(), t)};
}

// Exact comparison in Z[zeta], zeta a primitive 2^M-th root of unity.
std::vector<long long> reduce(const std::vector<long long>& h) {
  const std::size_t half = h.size() / 2;
  std::vector<long long> out(half);
  for (std::size_t e = 0; e < half; ++e) out[e] = h[e] - h[e + half];
  return out;
}

Outcome ac3_beta() {
  long long cases = 0;
  long long mismatches = 0;
  for (int j1 = 1; j1 <= 6; ++j1) {
    for (int j2 = 1; j2 <= 6; ++j2) {
      const int bits = j1 + j2 + 1;
      const std::int64_t modulus = std::int64_t{1} << bits;
      for (std::int64_t m = -256; m <= 256; ++m) {
        std::vector<long long> brute(static_cast<std::size_t>(modulus), 0);
        for (std::int64_t k1 = 0; k1 < (std::int64_t{1} << j1); ++k1) {
          for (std::int64_t k2 = 0; k2 < (std::int64_t{1} << j2); ++k2) {
            const std::int64_t num = (2 * k1 + 1) * (std::int64_t{1} << j2) - (2 * k2 + 1) * (std::int64_t{1} << j1);
            ++brute[static_cast<std::size_t>(((-m * num) % modulus + modulus) % modulus)];
          }
        }
        std::vector<long long> closed(static_cast<std::size_t>(modulus), 0);
        const auto term = beta_sum_exact(m, j1, j2);
        if (term.magnitude != 0) {
          const std::uint64_t e = term.exponent << (bits - term.log2_order);
          closed[e & static_cast<std::uint64_t>(modulus - 1)] += term.magnitude;
        }
        ++cases;
        if (reduce(brute) != reduce(closed)) ++mismatches;
      }
    }
  }
  return {mismatches == 0, fmt("%lld mismatches in %lld exact (j1, j2, m) cases", mismatches, cases)};
}

Outcome ac4_spectrum() {
  double worst = 0.0;
  for (int dim = 2; dim <= 6; ++dim) {
    const auto spectrum = phi_spectrum(dim);
    for (std::int64_t n = 1; n <= (std::int64_t{3} << dim); ++n) {
      Eigen::VectorXcd brute = Eigen::VectorXcd::Zero(dim);
      for (int j = 1; j <= dim; ++j) {
        for (std::int64_t k = 0; k < (std::int64_t{1} << j); ++k) {
          const DyadicInterval arc{j, k};
          brute += g_hat_coefficient(arc, n) * omega_vector(arc, dim);
        }
      }
      const auto closed = spectrum.at(TaylorIndex(static_cast<std::uint64_t>(n)));
      const double ref = std::max(closed.norm(), brute.norm());
      if (ref > 1e-9) worst = std::max(worst, (brute - closed).norm() / ref);
    }
  }
  int bad_counts = 0;
  for (int dim = 2; dim <= 256; ++dim) {
    if (phi_spectrum(dim).support_size() != static_cast<std::size_t>(dim + dim * (dim - 1) / 2)) ++bad_counts;
  }
  return {worst <= 1e-12 && bad_counts == 0,
          fmt("max relative error %.3g (<= 1e-12) for N <= 6; %d support-count mismatches for N <= 256",
              worst, bad_counts)};
}

Outcome ac5_routes() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int dim = 2; dim <= 256; dim *= 2) {
    const double a = embedding_form_spectral(dim);
    const double b = embedding_form_closed(dim);
    worst = std::max(worst, std::abs(a - b) / std::max(a, b));
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-9 && t < 120.0, fmt("max relative gap %.3g (<= 1e-9), %.2f s (< 120 s)", worst, t)};
}

Outcome ac6_quadrature() {
  double worst = 0.0;
  const DyadicInterval arcs[] = {{0, 0}, {1, 1}, {2, 2}, {3, 5}, {4, 9}};
  for (const auto& arc : arcs) {
    for (int a : {0, 1, 2, 5, 17, 64, 130, 200}) {
      for (int b : {0, 3, 8, 64, 199, 200}) {
        // 2-D tensor Gauss-Legendre (>= 128 nodes per axis, panels scaled to the exponents).
        const int rp = 4 + (a + b) / 8;
        const int ap = 4 + std::abs(a - b) / 2;
        const double radial = oracle::integrate(
            [&](double r) { return std::pow(r, a + b) * (1.0 - r * r) * 2.0 * oracle::kPi * r; },
            1.0 - arc.length(), 1.0, 32, rp);
        const cd angular = oracle::integrate(
            [&](double x) { return std::polar(1.0, 2.0 * oracle::kPi * (a - b) * x); }, arc.left(),
            arc.right(), 32, ap);
        const cd quad = radial * angular;
        worst = std::max(worst, std::abs(moment_carleson_square(CarlesonSquare(arc), a, b) - quad));
        if (arc.rank == 0) worst = std::max(worst, std::abs(moment_disk(a, b) - quad));
      }
    }
  }
  const auto phi = phi_spectrum(4);
  const double quad = oracle::polar(
      [&](double r, double x) {
        const cd w = std::polar(r, 2.0 * oracle::kPi * x);
        cd pairing{0.0, 0.0};
        for (const auto& e : phi.entries()) {
          pairing += std::pow(w, std::ldexp(1.0, e.coordinate)) * std::conj(e.value * std::pow(w, e.n.to_double()));
        }
        return std::norm(pairing);
      },
      0.0, 0.0, 1.0, 64, 8);  // 512 x 512 nodes
  const double value = embedding_form_spectral(4);
  const double rel = std::abs(value - quad) / quad;
  return {worst <= 1e-8 && rel <= 1e-4,
          fmt("moment max abs error %.3g (<= 1e-8); embedding N=4 relative error %.3g (<= 1e-4)", worst, rel)};
}

Outcome ac7_growth() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto report = growth_experiment({8, 16, 32, 64, 128, 256});
  const double t = seconds_since(t0);
  const bool pass = report.value_band <= 1.5 && report.intensity_band <= 2.0 && report.ratio_band <= 1.6 &&
                    t < 600.0;
  return {pass, fmt("value/(N ln N) band %.4f (<= 1.5), intensity band %.4f (<= 2.0), "
                    "ratio/sqrt(ln N) band %.4f (<= 1.6), %.1f s (< 600 s)",
                    report.value_band, report.intensity_band, report.ratio_band, t)};
}

Outcome ac8_construction_checks() {
  const Thresholds defaults;
  bool pass = true;
  std::ostringstream summary;
  for (int dim : {8, 32, 128}) {
    const auto reports = verify_construction(dim, 12, 1, defaults);
    summary << "N=" << dim << ":";
    for (const auto& r : reports) {
      pass = pass && r.pass;
      summary << ' ' << r.name << '=' << fmt("%.4g", r.witnessed) << (r.pass ? "" : "(FAIL)");
    }
    summary << "; ";
  }
  const auto l3 = check_offdiagonal(6, 8, defaults);
  pass = pass && l3.witnessed <= 0.05;
  summary << fmt("L3 worst final increment %.4f (<= 0.05)", l3.witnessed);
  return {pass, summary.str() + " [L1 <= 50, L2 <= 10, Omega <= 1]"};
}

Outcome ac9_determinism() {
  auto run = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return std::make_pair(code, out.str());
  };
  const std::vector<std::string> serial{"embedding", "--dim", "64", "--threads", "1"};
  const auto a = run(serial);
  const auto b = run(serial);
  const bool identical = a.first == 0 && a.second == b.second;

  const auto multi = run({"embedding", "--dim", "64", "--threads", "4"});
  const auto ja = nlohmann::json::parse(a.second);
  const auto jm = nlohmann::json::parse(multi.second);
  double worst = 0.0;
  for (const char* key : {"value_spectral", "value_paper", "ratio_lower_bound"}) {
    const double x = ja[key].get<double>();
    const double y = jm[key].get<double>();
    worst = std::max(worst, std::abs(x - y) / std::abs(x));
  }
  for (const char* key : {"value", "remainder_bound"}) {
    const double x = ja["intensity"][key].get<double>();
    const double y = jm["intensity"][key].get<double>();
    worst = std::max(worst, std::abs(x - y) / std::abs(x));
  }
  return {identical && worst <= 1e-12,
          fmt("serial reruns byte-identical: %s; 1 vs 4 threads max relative difference %.3g (<= 1e-12)",
              identical ? "yes" : "no", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 wavelet identities", ac1_partitions},
      {"AC2 Littlewood-Paley identity", ac2_littlewood_paley},
      {"AC3 beta closed form", ac3_beta},
      {"AC4 spectrum correctness", ac4_spectrum},
      {"AC5 two-route agreement", ac5_routes},
      {"AC6 quadrature oracles", ac6_quadrature},
      {"AC7 growth bands", ac7_growth},
      {"AC8 construction and off-diagonal checks", ac8_construction_checks},
      {"AC9 determinism", ac9_determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.summary.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
