#include "carleson/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include "carleson/disk_calculus.hpp"
#include "carleson/errors.hpp"

namespace carleson {

namespace {

constexpr double kPi = std::numbers::pi;

std::string format_number(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw NumericError("number formatting failed", value);
  return std::string(buf, end);
}

CheckReport finish(CheckReport report) {
  report.pass = report.witnessed <= report.threshold;
  return report;
}

// sin(pi x / 2^bits) for an integer x given by its residue mod 2^{bits+1}.
double sin_pi_over_pow2(std::uint64_t residue, int bits) {
  const std::uint64_t half = std::uint64_t{1} << bits;
  const std::uint64_t full = half << 1;
  residue &= full - 1;
  const double centered =
      residue < half ? static_cast<double>(residue) : -static_cast<double>(full - residue);
  return std::sin(kPi * std::ldexp(centered, -bits));
}

// 2^l mod 2^bits.
std::uint64_t pow2_mod(int l, int bits) {
  return l < bits ? (std::uint64_t{1} << l) : 0;
}

std::vector<Eigen::VectorXcd> unit_net(int dim) {
  // Basis vectors first, then discrete Fourier directions, 64 in total.
  std::vector<Eigen::VectorXcd> net;
  for (int l = 0; l < dim && net.size() < 32; ++l) net.push_back(Eigen::VectorXcd::Unit(dim, l));
  for (int s = 0; net.size() < 64; ++s) {
    Eigen::VectorXcd v(dim);
    for (int l = 0; l < dim; ++l) v[l] = root_of_unity(static_cast<std::uint64_t>(s) * l, 6);
    net.push_back(v / std::sqrt(static_cast<double>(dim)));
  }
  return net;
}

std::vector<Eigen::VectorXcd> random_units(int dim, std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::VectorXcd> out;
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXcd v(dim);
    for (int l = 0; l < dim; ++l) {
      const double re = normal(rng);
      const double im = normal(rng);
      v[l] = {re, im};
    }
    out.push_back(v / v.norm());
  }
  return out;
}

// Frequencies n != 0 with g_I^(n) != 0, both signs.
struct FourierTable {
  std::vector<std::int64_t> freq;
  std::vector<std::complex<double>> coeff;
};

FourierTable fourier_table(const DyadicInterval& arc, const WaveletProfile& profile) {
  FourierTable t;
  const double len = arc.length();
  const auto hi = static_cast<std::int64_t>(std::floor(kSupportHigh / len));
  for (std::int64_t n = -hi; n <= hi; ++n) {
    if (n == 0) continue;
    const auto c = g_hat_coefficient(arc, n, profile);
    if (c == 0.0) continue;
    t.freq.push_back(n);
    t.coeff.push_back(c);
  }
  return t;
}

std::vector<DyadicInterval> arcs_up_to(int max_rank) {
  std::vector<DyadicInterval> arcs;
  for (int r = 0; r <= max_rank; ++r) {
    for (std::int64_t k = 0; k < (std::int64_t{1} << r); ++k) arcs.push_back({r, k});
  }
  return arcs;
}

bool contained(const DyadicInterval& inner, const DyadicInterval& outer) {
  if (inner.rank < outer.rank) return false;
  return (inner.index >> (inner.rank - outer.rank)) == outer.index;
}

// Per-arc-K tables for int_{Q_K} r^s e^{2 pi i d x} dA_1.
struct SquareTables {
  std::int64_t max_freq;
  std::vector<std::complex<double>> angular;  // index d + 2 max_freq
  std::vector<double> radial;                 // index s

  SquareTables(const DyadicInterval& arc, std::int64_t max_n) : max_freq(max_n) {
    const CarlesonSquare square(arc);
    angular.resize(static_cast<std::size_t>(4 * max_n + 1));
    for (std::int64_t d = -2 * max_n; d <= 2 * max_n; ++d) {
      angular[static_cast<std::size_t>(d + 2 * max_n)] =
          d == 0 ? std::complex<double>(arc.length(), 0.0)
                 : angular_factor(arc, mod_pow2(d, arc.rank + 1), static_cast<double>(d));
    }
    radial.resize(static_cast<std::size_t>(2 * max_n + 1));
    for (std::int64_t s = 0; s <= 2 * max_n; ++s) {
      radial[static_cast<std::size_t>(s)] = radial_factor(square.width(), static_cast<double>(s));
    }
  }

  std::complex<double> pair(const FourierTable& a, const FourierTable& b) const {
    std::complex<double> total{0.0, 0.0};
    for (std::size_t i = 0; i < a.freq.size(); ++i) {
      std::complex<double> row{0.0, 0.0};
      const std::int64_t n = a.freq[i];
      const std::int64_t an = n < 0 ? -n : n;
      for (std::size_t m = 0; m < b.freq.size(); ++m) {
        const std::int64_t nn = b.freq[m];
        const std::int64_t bn = nn < 0 ? -nn : nn;
        row += std::conj(b.coeff[m]) * angular[static_cast<std::size_t>(n - nn + 2 * max_freq)] *
               radial[static_cast<std::size_t>(an + bn)];
      }
      total += a.coeff[i] * row;
    }
    return total;
  }
};

// Sums indexed by truncation rank: entry t collects pairs with max rank == t.
std::vector<double> offdiagonal_by_rank(const DyadicInterval& square_arc, int max_rank, int max_rd,
                                   const WaveletProfile& profile) {
  const auto arcs = arcs_up_to(max_rank);
  std::vector<FourierTable> tables;
  tables.reserve(arcs.size());
  std::int64_t max_n = 1;
  for (const auto& arc : arcs) {
    tables.push_back(fourier_table(arc, profile));
    for (auto n : tables.back().freq) max_n = std::max(max_n, n < 0 ? -n : n);
  }
  const SquareTables sq(square_arc, max_n);
  std::vector<double> by_rank(static_cast<std::size_t>(max_rank) + 1, 0.0);
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    for (std::size_t b = a; b < arcs.size(); ++b) {
      const auto& small = arcs[b].rank >= arcs[a].rank ? arcs[b] : arcs[a];
      const auto& large = arcs[b].rank >= arcs[a].rank ? arcs[a] : arcs[b];
      if (circular_relative_distance(small, large) > max_rd) continue;
      if (a == b && contained(arcs[a], square_arc)) continue;
      const double value = std::abs(sq.pair(tables[a], tables[b]));
      // (I, J) and (J, I) contribute equally.
      by_rank[static_cast<std::size_t>(small.rank)] += a == b ? value : 2.0 * value;
    }
  }
  return by_rank;
}

}  // namespace

Thresholds Thresholds::from_json(const nlohmann::json& doc) {
  Thresholds t;
  t.l1 = doc.value("l1", t.l1);
  t.l2 = doc.value("l2", t.l2);
  t.l3_increment = doc.value("l3_increment", t.l3_increment);
  t.l4 = doc.value("l4", t.l4);
  t.l5_median_factor = doc.value("l5_median_factor", t.l5_median_factor);
  t.omega = doc.value("omega", t.omega);
  t.value_band = doc.value("value_band", t.value_band);
  t.intensity_band = doc.value("intensity_band", t.intensity_band);
  t.ratio_band = doc.value("ratio_band", t.ratio_band);
  return t;
}

nlohmann::json Thresholds::to_json() const {
  return {{"l1", l1},
          {"l2", l2},
          {"l3_increment", l3_increment},
          {"l4", l4},
          {"l5_median_factor", l5_median_factor},
          {"omega", omega},
          {"value_band", value_band},
          {"intensity_band", intensity_band},
          {"ratio_band", ratio_band}};
}

nlohmann::json CheckReport::to_json() const {
  return {{"check", name},
          {"parameters", parameters},
          {"witnessed", witnessed},
          {"threshold", threshold},
          {"verdict", pass ? "pass" : "fail"},
          {"details", details}};
}

Eigen::MatrixXcd diagonal_block_form(const DyadicInterval& arc, int dim) {
  if (!arc.is_arc()) throw DomainError("diagonal_block_form expects a dyadic arc");
  if (dim < 2) throw DomainError("dimension N must be >= 2");
  const int rho = arc.rank;
  const auto odd = static_cast<std::uint64_t>(2 * arc.index + 1);
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j = std::max(rho, 1); j <= dim; ++j) {
    const double weight = std::ldexp(1.0, rho - j);  // |I| / |K|
    const double count = std::ldexp(1.0, j - rho);
    for (int a = 0; a < j; ++a) {
      const double ca = coeff_a(j - a, dim);
      q(a, a) += weight * count * ca * ca;
      for (int b = a + 1; b < j; ++b) {
        // sum_{I in D_j(K)} e^{2 pi i delta C_I}, delta = 2^a - 2^b
        //   = e^{i pi delta (2k+1) / 2^rho} sin(pi delta / 2^rho) / sin(pi delta / 2^j)
        const std::uint64_t delta = pow2_mod(a, rho + 1) - pow2_mod(b, rho + 1);
        const double top = sin_pi_over_pow2(delta, rho);
        if (top == 0.0) continue;
        const double bottom = std::sin(kPi * (std::ldexp(1.0, a - j) - std::ldexp(1.0, b - j)));
        const std::complex<double> sum = root_of_unity(delta * odd, rho + 1) * (top / bottom);
        const std::complex<double> term = weight * ca * coeff_a(j - b, dim) * sum;
        q(a, b) += term;
        q(b, a) += std::conj(term);
      }
    }
  }
  return q;
}

std::vector<CheckReport> verify_construction(int dim, int max_rank, std::uint64_t seed,
                                                    const Thresholds& thresholds) {
  if (dim < 8) throw DomainError("construction suite needs N >= 8");
  if (max_rank < 0 || max_rank > 14) throw DomainError("construction suite max_rank outside [0, 14]");
  std::vector<CheckReport> out;

  {
    CheckReport l1{"L1", {{"dim", dim}, {"max_rank", max_rank}}};
    l1.threshold = thresholds.l1;
    std::vector<double> ratio;
    for (int r = 0; r <= max_rank; ++r) {
      const DyadicInterval arc{r, 0};
      ratio.push_back(g_norm_dA1(arc) / arc.length());
      l1.details.push_back({{"rank", r}, {"ratio", ratio.back()}});
      l1.witnessed = std::max(l1.witnessed, ratio.back());
    }
    if (max_rank >= 6) {
      const int far = std::min(max_rank, 12);
      l1.parameters["stability_ranks"] = {6, far};
      l1.parameters["stability_change"] = std::abs(ratio[far] - ratio[6]) / ratio[6];
    }
    out.push_back(finish(std::move(l1)));
  }

  {
    const int top_rank = std::min(max_rank, dim);
    CheckReport l2{"L2", {{"dim", dim}, {"max_rank", top_rank}, {"seed", seed},
                          {"net_vectors", 64}, {"random_vectors", 64}}};
    l2.threshold = thresholds.l2;
    auto vectors = unit_net(dim);
    for (auto& v : random_units(dim, seed, 64)) vectors.push_back(std::move(v));
    Eigen::MatrixXcd basis(dim, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = vectors[i];

    double exact_sup = 0.0;
    for (int rho = 0; rho <= top_rank; ++rho) {
      // Q(K_{rho,k}) = U_k Q(K_{rho,0}) U_k^*, U_k = diag(e^{2 pi i 2^l k / 2^rho}).
      const Eigen::MatrixXcd q0 = diagonal_block_form({rho, 0}, dim);
      const Eigen::SparseMatrix<std::complex<double>> sparse = q0.sparseView();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(q0, Eigen::EigenvaluesOnly);
      const double lam = solver.eigenvalues()[dim - 1];
      exact_sup = std::max(exact_sup, lam);
      double rank_best = 0.0;
      std::int64_t rank_arg = 0;
      Eigen::MatrixXcd rotated(basis.rows(), basis.cols());
      for (std::int64_t k = 0; k < (std::int64_t{1} << rho); ++k) {
        for (int l = 0; l < dim; ++l) {
          const std::uint64_t res = pow2_mod(l, rho) * static_cast<std::uint64_t>(k);
          rotated.row(l) = basis.row(l) * root_of_unity(0 - res, rho);
        }
        const Eigen::MatrixXcd image = sparse * rotated;
        for (Eigen::Index c = 0; c < rotated.cols(); ++c) {
          const double value = rotated.col(c).dot(image.col(c)).real();
          if (value > rank_best) {
            rank_best = value;
            rank_arg = k;
          }
        }
      }
      l2.details.push_back({{"rank", rho}, {"net_max", rank_best}, {"arc_index", rank_arg},
                            {"lambda_max", lam}});
      l2.witnessed = std::max(l2.witnessed, rank_best);
    }
    l2.parameters["lambda_max_sup"] = exact_sup;
    out.push_back(finish(std::move(l2)));
  }

  {
    CheckReport om{"Omega", {{"dim", dim}}};
    om.threshold = thresholds.omega;
    const double scale = 6.0 * std::log(static_cast<double>(dim)) / (kPi * kPi);
    double tail = 0.0;  // sum_{m <= j} a_m^2, the norm for ranks beyond kMaxArcRank
    for (int j = 1; j <= dim; ++j) {
      tail += coeff_a(j, dim) * coeff_a(j, dim);
      const double norm2 = j <= kMaxArcRank ? omega_vector({j, 0}, dim).squaredNorm() : tail;
      const double value = norm2 * scale;
      om.witnessed = std::max(om.witnessed, value);
      if (j <= 4 || j == dim) om.details.push_back({{"rank", j}, {"scaled_norm2", value}});
    }
    out.push_back(finish(std::move(om)));
  }
  return out;
}

double offdiagonal_partial_sum(const DyadicInterval& arc, int max_rank, int max_rd,
                          const WaveletProfile& profile) {
  const auto by_rank = offdiagonal_by_rank(arc, max_rank, max_rd, profile);
  double total = 0.0;
  for (double v : by_rank) total += v;
  return total;
}

CheckReport check_offdiagonal(int max_rank, int max_rd, const Thresholds& thresholds) {
  if (max_rank < 1 || max_rank > 6) throw DomainError("L3 max_rank outside [1, 6]");
  if (max_rd < 0 || max_rd > 8) throw DomainError("L3 max_rd outside [0, 8]");
  CheckReport report{"L3", {{"max_rank", max_rank}, {"max_rd", max_rd}, {"square_ranks", 3}}};
  report.threshold = thresholds.l3_increment;
  double worst_constant = 0.0;
  for (const auto& square : arcs_up_to(3)) {
    const auto by_rank = offdiagonal_by_rank(square, max_rank, max_rd, WaveletProfile{});
    std::vector<double> partial;
    double running = 0.0;
    for (double v : by_rank) {
      running += v;
      partial.push_back(running / square.length());
    }
    const double total = partial.back();
    const double increment = total > 0.0 ? (total - partial[partial.size() - 2]) / total : 0.0;
    report.witnessed = std::max(report.witnessed, increment);
    worst_constant = std::max(worst_constant, total);
    report.details.push_back({{"rank", square.rank}, {"index", square.index},
                              {"partial_sums_over_K", partial}, {"final_increment", increment}});
  }
  report.parameters["max_constant"] = worst_constant;
  return finish(std::move(report));
}

CheckReport check_littlewood_paley(int max_rank, int max_rd, const Thresholds& thresholds) {
  if (max_rank < 0 || max_rank > 8) throw DomainError("L4 max_rank outside [0, 8]");
  if (max_rd < 0) throw DomainError("L4 max_rd must be >= 0");
  CheckReport report{"L4", {{"max_rank", max_rank}, {"max_rd", max_rd}}};
  report.threshold = thresholds.l4;
  double diag_worst = 0.0;
  double off_worst = 0.0;
  long long pairs = 0;
  for (int ri = 0; ri <= max_rank; ++ri) {
    for (std::int64_t ki = 0; ki < (std::int64_t{1} << ri); ++ki) {
      const DyadicInterval small{ri, ki};
      for (int rj = 0; rj <= ri; ++rj) {
        const std::int64_t ancestor = ki >> (ri - rj);
        for (std::int64_t kj = ancestor - max_rd; kj <= ancestor + max_rd; ++kj) {
          const DyadicInterval large{rj, kj};
          const double expected = small == large ? small.length() : 0.0;
          const double err = std::abs(halfplane_lp_pairing(small, large) - expected) / small.length();
          ++pairs;
          if (small == large) {
            diag_worst = std::max(diag_worst, err);
          } else {
            off_worst = std::max(off_worst, err);
          }
        }
      }
    }
  }
  report.witnessed = std::max(diag_worst, off_worst);
  report.details.push_back({{"pairs", pairs}, {"diagonal_max_error", diag_worst},
                            {"off_diagonal_max_error", off_worst}});
  return finish(std::move(report));
}

CheckReport check_localization(const Thresholds& thresholds) {
  const WaveletProfile smooth(RampKind::SmoothCinf);
  CheckReport report{"L5", {{"ramp", "smooth-Cinf"}, {"x_offsets", "-4:0.5:4"},
                            {"y_scales", "2^-4..2^2"}, {"ranks", {0, 3}}}};
  report.threshold = thresholds.l5_median_factor;
  std::vector<double> values;
  double peak = 0.0;
  nlohmann::json peak_at;
  for (const DyadicInterval arc : {DyadicInterval{0, 0}, DyadicInterval{3, 2}}) {
    const double len = arc.length();
    for (int xi = -8; xi <= 8; ++xi) {
      const double offset = 0.5 * xi;
      for (int yi = -4; yi <= 2; ++yi) {
        const double scale = std::ldexp(1.0, yi);
        const double x = arc.center() + offset * len;
        const double y = scale * len;
        const double f = std::abs(eval_f_poisson(arc, x, y, smooth));
        const double stat = (1.0 + offset * offset) * f * std::sqrt(len * y) *
                            std::exp(2.0 * kPi * scale / 3.0) / (1.0 + scale * scale);
        values.push_back(stat);
        if (stat > peak) {
          peak = stat;
          peak_at = {{"rank", arc.rank}, {"x_offset", offset}, {"y_scale", scale}};
        }
      }
    }
  }
  std::vector<double> sorted = values;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
  const double median = sorted[sorted.size() / 2];
  report.witnessed = median > 0.0 ? peak / median : std::numeric_limits<double>::infinity();
  report.details.push_back({{"max", peak}, {"median", median}, {"max_at", peak_at},
                            {"points", values.size()}});
  return finish(std::move(report));
}

std::vector<CheckReport> verify_analysis(int max_rank, int max_rd,
                                                const Thresholds& thresholds) {
  if (max_rank < 1 || max_rank > 6) throw DomainError("analysis suite max_rank outside [1, 6]");
  if (max_rd < 0 || max_rd > 8) throw DomainError("analysis suite max_rd outside [0, 8]");
  return {check_offdiagonal(max_rank, max_rd, thresholds),
          check_littlewood_paley(std::min(max_rank, 5), std::min(max_rd, 4), thresholds),
          check_localization(thresholds)};
}

std::string GrowthReport::to_csv() const {
  std::ostringstream out;
  out << "N,intensity,value_spectral,value_paper,ratio,ratio_over_sqrtlog\n";
  for (const auto& row : rows) {
    out << row.dim << ',' << format_number(row.intensity) << ',' << format_number(row.value_spectral)
        << ',' << format_number(row.value_paper) << ',' << format_number(row.ratio) << ','
        << format_number(row.ratio_over_sqrtlog) << '\n';
  }
  return out.str();
}

GrowthReport growth_experiment(const std::vector<int>& dims, int max_rank,
                               const ScanOptions& options, const Thresholds& thresholds,
                               const WaveletProfile& profile) {
  for (int n : dims) {
    if (n < 8 || n > kMaxEmbeddingDim) {
      throw DomainError("growth experiment dimensions must lie in [8, 256], got " + std::to_string(n));
    }
  }
  GrowthReport report;
  for (int n : dims) {
    try {
      const int rank = max_rank < 0 ? default_max_rank(n) : max_rank;
      GrowthRow row;
      row.dim = n;
      row.full = ratio_lower_bound(n, rank, options, profile);
      row.intensity = row.full.intensity.value;
      row.value_spectral = row.full.value_spectral;
      row.value_paper = row.full.value_paper;
      row.ratio = row.full.ratio_lower_bound;
      row.ratio_over_sqrtlog = row.ratio / std::sqrt(std::log(static_cast<double>(n)));
      report.rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      throw GrowthAborted(std::string("growth experiment aborted at N = ") + std::to_string(n) +
                              ": " + e.what(),
                          report);
    }
  }

  auto band = [&](auto&& metric) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& row : report.rows) {
      const double v = metric(row);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return report.rows.empty() || lo <= 0.0 ? 1.0 : hi / lo;
  };
  report.value_band = band([](const GrowthRow& r) {
    return r.value_spectral / (r.dim * std::log(static_cast<double>(r.dim)));
  });
  report.intensity_band = band([](const GrowthRow& r) { return r.intensity; });
  report.ratio_band = band([](const GrowthRow& r) { return r.ratio_over_sqrtlog; });

  if (report.rows.size() >= 2) {
    double mx = 0.0;
    double my = 0.0;
    for (const auto& row : report.rows) {
      mx += std::log(static_cast<double>(row.dim));
      my += row.value_spectral / row.dim;
    }
    mx /= static_cast<double>(report.rows.size());
    my /= static_cast<double>(report.rows.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& row : report.rows) {
      const double dx = std::log(static_cast<double>(row.dim)) - mx;
      sxy += dx * (row.value_spectral / row.dim - my);
      sxx += dx * dx;
    }
    report.slope = sxy / sxx;
  }

  nlohmann::json dims_json = dims;
  auto gate = [&](const char* name, double witnessed, double threshold) {
    CheckReport c{name, {{"dims", dims_json}, {"max_rank", max_rank}}};
    c.witnessed = witnessed;
    c.threshold = threshold;
    return finish(std::move(c));
  };
  report.checks.push_back(gate("value_band", report.value_band, thresholds.value_band));
  report.checks.push_back(gate("intensity_band", report.intensity_band, thresholds.intensity_band));
  report.checks.push_back(gate("ratio_band", report.ratio_band, thresholds.ratio_band));
  return report;
}

}  // namespace carleson
