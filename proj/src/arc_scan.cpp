#include "carleson/arc_scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_map>

#include <Eigen/Eigenvalues>
#include <omp.h>

#include "carleson/disk_calculus.hpp"
#include "carleson/errors.hpp"

namespace carleson {

namespace {

struct TopPair {
  double value;
  Eigen::VectorXcd vector;
};

TopPair top_eigenpair(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigen solver failed", std::nan(""));
  const auto last = m.rows() - 1;
  return {solver.eigenvalues()[last], solver.eigenvectors().col(last)};
}

double top_eigenvalue(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigen solver failed", std::nan(""));
  return solver.eigenvalues()[m.rows() - 1];
}

Eigen::MatrixXcd arrow_dense(const Eigen::MatrixXcd& block, const Eigen::MatrixXcd& coupling,
                             const Eigen::VectorXd& diagonal) {
  const auto l = block.rows();
  const auto a = diagonal.size();
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(l + a, l + a);
  full.topLeftCorner(l, l) = block;
  full.topRightCorner(l, a) = coupling;
  full.bottomLeftCorner(a, l) = coupling.adjoint();
  full.bottomRightCorner(a, a) = diagonal.cast<std::complex<double>>().asDiagonal();
  return full;
}

// Solves the secular equation given lambda_max(block). If floor is positive and the
// largest eigenvalue is provably below it, returns NaN instead.
double secular_solve(const Eigen::MatrixXcd& block, const Eigen::MatrixXcd& coupling,
                     const Eigen::VectorXd& diagonal, double block_top, double floor = 0.0) {
  std::vector<Eigen::Index> active;
  double isolated = -std::numeric_limits<double>::infinity();
  double active_top = -std::numeric_limits<double>::infinity();
  double diag_top = -std::numeric_limits<double>::infinity();
  for (Eigen::Index q = 0; q < diagonal.size(); ++q) {
    diag_top = std::max(diag_top, diagonal[q]);
    if (coupling.col(q).squaredNorm() > 0.0) {
      active.push_back(q);
      active_top = std::max(active_top, diagonal[q]);
    } else {
      isolated = std::max(isolated, diagonal[q]);
    }
  }
  if (active.empty()) {
    const double top = std::max(block_top, isolated);
    return floor > 0.0 && top < floor ? std::nan("") : top;
  }

  const auto l = block.rows();
  const auto na = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXcd c(l, na);
  Eigen::VectorXd d(na);
  for (Eigen::Index i = 0; i < na; ++i) {
    c.col(i) = coupling.col(active[i]);
    d[i] = diagonal[active[i]];
  }

  double lo = std::max(block_top, active_top);
  double hi = std::max(block_top, diag_top) + coupling.norm();
  const double scale = std::max({std::abs(lo), std::abs(hi), std::numeric_limits<double>::min()});

  // h(x) = lambda_max(S(x)) - x is convex and decreasing on (lo, inf).
  Eigen::MatrixXcd weighted(l, na);
  auto evaluate = [&](double x, double& slope) {
    const Eigen::ArrayXd inv = (x - d.array()).inverse();
    weighted = c * inv.matrix().asDiagonal();
    Eigen::MatrixXcd s = block + weighted * c.adjoint();
    const TopPair top = top_eigenpair(s);
    const Eigen::ArrayXd proj = (c.adjoint() * top.vector).array().abs2();
    slope = -1.0 - (proj * inv.square()).sum();
    return top.value - x;
  };

  if (floor > 0.0 && floor > lo) {
    if (floor > hi) return std::nan("");
    double slope = -1.0;
    if (evaluate(floor, slope) < 0.0) return std::nan("");
    lo = floor;
  }

  double x = hi;
  for (int iter = 0; iter < 100; ++iter) {
    double slope = -1.0;
    const double h = evaluate(x, slope);
    if (h == 0.0) return std::max(x, isolated);
    if (h > 0.0) lo = x; else hi = x;
    double next = x - h / slope;
    if (!(next > lo && next < hi) && h < 0.0) next = 0.5 * (lo + hi);
    if (!(next > lo) || !(next <= hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * scale || hi - lo <= 1e-15 * scale) {
      return std::max(next, isolated);
    }
    x = next;
  }
  return top_eigenvalue(arrow_dense(block, coupling, diagonal));
}

}  // namespace

double arrow_largest_eigenvalue(const Eigen::MatrixXcd& block, const Eigen::MatrixXcd& coupling,
                                const Eigen::VectorXd& diagonal) {
  if (block.rows() == 0) return diagonal.size() == 0 ? 0.0 : diagonal.maxCoeff();
  return secular_solve(block, coupling, diagonal, top_eigenvalue(block));
}

RankKernel::RankKernel(const VectorSpectrum& spectrum, int rank, const ScanOptions& options)
    : rank_(rank), dim_(spectrum.dim()) {
  if (rank < 0 || rank > kMaxScanRank) {
    throw DomainError("scan rank must lie in [0, " + std::to_string(kMaxScanRank) + "]");
  }
  const auto entries = spectrum.entries();
  const std::size_t count = entries.size();
  const std::uint64_t mask_r = (std::uint64_t{1} << rank) - 1;
  const std::uint64_t mask_r1 = (std::uint64_t{1} << (rank + 1)) - 1;
  const double width = std::ldexp(1.0, -rank);
  const double inv_width = std::ldexp(1.0, rank);
  const DyadicInterval first_arc{rank, 0};

  std::vector<std::uint64_t> residue(count);
  std::vector<int> top_bit(count);
  std::vector<double> magnitude(count);
  std::vector<char> shared(count, 0);
  for (std::size_t i = 0; i < count; ++i) {
    residue[i] = entries[i].n.low_bits(rank + 1);
    top_bit[i] = entries[i].n.bit_width() - 1;
    magnitude[i] = std::abs(entries[i].value);
    if (i > 0 && entries[i].n == entries[i - 1].n) shared[i] = shared[i - 1] = 1;
  }

  std::vector<char> is_aligned(dim_, 1);
  for (std::size_t i = 0; i < count; ++i) {
    if ((residue[i] & mask_r) != 0 || shared[i]) is_aligned[entries[i].coordinate] = 0;
  }
  std::vector<int> local(dim_, -1);
  for (int p = 0; p < dim_; ++p) {
    auto& list = is_aligned[p] ? aligned_ : mixed_;
    local[p] = static_cast<int>(list.size());
    list.push_back(p);
  }
  const auto nm = mixed_.size();
  const auto na = aligned_.size();

  diagonal_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(na));
  for (std::size_t i = 0; i < count; ++i) {
    const double self = std::norm(entries[i].value) *
                        radial_factor(width, 2.0 * entries[i].n.to_double());
    trace_ += self;
    if (is_aligned[entries[i].coordinate]) diagonal_[local[entries[i].coordinate]] += self;
  }
  const double tolerance = options.prune_tolerance * trace_;

  // Magnitude bound of a normalized pair term by top bits (h1, h2).
  int bit_span = 0;
  for (int h : top_bit) bit_span = std::max(bit_span, h + 1);
  std::vector<double> bound_table(static_cast<std::size_t>(bit_span) * bit_span, -1.0);
  auto pair_bound = [&](int h1, int h2) {
    double& slot = bound_table[static_cast<std::size_t>(h1) * bit_span + h2];
    if (slot < 0.0) {
      const int lo = std::min(h1, h2);
      const int hi = std::max(h1, h2);
      const double radial = radial_factor(width, std::ldexp(1.0, lo) + std::ldexp(1.0, hi));
      double angular = 1.0;  // |A(d)| <= |I|, normalized
      if (hi >= lo + 2) {
        const double gap = std::ldexp(1.0, hi) - std::ldexp(1.0, lo + 1);
        angular = std::min(1.0, inv_width / (std::numbers::pi * gap));
      }
      slot = radial * angular;
    }
    return slot;
  };

  // Normalized pair term c_i conj(c_m) R(n_i + n_m) A(d) / |I| with the k-phase removed.
  auto pair_term = [&](std::size_t i, std::size_t m) -> std::complex<double> {
    const SignedIndex d = signed_difference(entries[i].n, entries[m].n);
    std::complex<double> angular{1.0, 0.0};
    if (!d.is_zero()) {
      const std::uint64_t res = (residue[i] - residue[m]) & mask_r1;
      if ((res & mask_r) == 0) return {0.0, 0.0};
      angular = angular_factor(first_arc, res, d.to_double()) * inv_width;
    }
    const double radial = radial_factor(width, (entries[i].n + entries[m].n).to_double());
    return entries[i].value * std::conj(entries[m].value) * radial * angular;
  };

  auto keep = [&](std::size_t i, std::size_t m, double weight) {
    const double bound = magnitude[i] * magnitude[m] * pair_bound(top_bit[i], top_bit[m]);
    if (bound < tolerance) {
      pruned_mass_ += weight * bound;
      return false;
    }
    ++kept_pairs_;
    return true;
  };

  // Mixed x mixed.
  std::vector<std::unordered_map<std::uint64_t, std::complex<double>>> block_acc(nm * nm);
  // Mixed x aligned, keyed per mixed coordinate by residue.
  std::vector<std::vector<std::uint64_t>> residues_of(nm);
  for (std::size_t i = 0; i < count; ++i) {
    const int p = entries[i].coordinate;
    if (!is_aligned[p]) residues_of[local[p]].push_back(residue[i] & mask_r);
  }
  coupling_residues_.resize(nm);
  coupling_rows_.resize(nm);
  for (std::size_t a = 0; a < nm; ++a) {
    auto& r = residues_of[a];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    coupling_residues_[a] = r;
    coupling_rows_[a] = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(r.size()),
                                               static_cast<Eigen::Index>(na));
  }

  for (std::size_t i = 0; i < count; ++i) {
    const int p = entries[i].coordinate;
    if (is_aligned[p]) continue;
    const auto a = static_cast<std::size_t>(local[p]);
    const auto& rs = coupling_residues_[a];
    const auto row = static_cast<Eigen::Index>(
        std::lower_bound(rs.begin(), rs.end(), residue[i] & mask_r) - rs.begin());
    for (std::size_t m = 0; m < count; ++m) {
      const int q = entries[m].coordinate;
      if (is_aligned[q]) {
        if (!keep(i, m, 2.0)) continue;
        const auto term = pair_term(i, m);
        if (term != 0.0) coupling_rows_[a](row, local[q]) += term;
        continue;
      }
      const auto b = static_cast<std::size_t>(local[q]);
      if (b < a) continue;
      if (!keep(i, m, a == b ? 1.0 : 2.0)) continue;
      const auto term = pair_term(i, m);
      if (term == 0.0) continue;
      block_acc[a * nm + b][(residue[i] - residue[m]) & mask_r] += term;
    }
  }

  block_terms_.resize(nm * nm);
  for (std::size_t idx = 0; idx < block_acc.size(); ++idx) {
    auto& terms = block_terms_[idx];
    for (const auto& [t, v] : block_acc[idx]) terms.push_back({t, v});
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.t < y.t; });
  }

  if (nm > 0) {
    phases_.resize(std::size_t{1} << rank);
    for (std::uint64_t m = 0; m < phases_.size(); ++m) phases_[m] = root_of_unity(m, rank);
  }
}

void RankKernel::assemble(std::int64_t k, Eigen::MatrixXcd& block, Eigen::MatrixXcd& coupling) const {
  const auto nm = static_cast<Eigen::Index>(mixed_.size());
  const auto na = static_cast<Eigen::Index>(aligned_.size());
  const std::uint64_t mask = (std::uint64_t{1} << rank_) - 1;
  const auto kk = static_cast<std::uint64_t>(k);
  block.resize(nm, nm);
  coupling.setZero(nm, na);
  for (Eigen::Index a = 0; a < nm; ++a) {
    for (Eigen::Index b = a; b < nm; ++b) {
      std::complex<double> sum{0.0, 0.0};
      for (const auto& term : block_terms_[static_cast<std::size_t>(a * nm + b)]) {
        sum += term.value * phases_[(term.t * kk) & mask];
      }
      if (a == b) {
        block(a, a) = sum.real();
      } else {
        block(a, b) = sum;
        block(b, a) = std::conj(sum);
      }
    }
    const auto& rs = coupling_residues_[static_cast<std::size_t>(a)];
    const auto& rows = coupling_rows_[static_cast<std::size_t>(a)];
    for (std::size_t t = 0; t < rs.size(); ++t) {
      coupling.row(a) += phases_[(rs[t] * kk) & mask] * rows.row(static_cast<Eigen::Index>(t));
    }
  }
}

Eigen::MatrixXcd RankKernel::dense(std::int64_t k) const {
  Eigen::MatrixXcd block;
  Eigen::MatrixXcd coupling;
  assemble(k, block, coupling);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (std::size_t a = 0; a < mixed_.size(); ++a) {
    for (std::size_t b = 0; b < mixed_.size(); ++b) {
      out(mixed_[a], mixed_[b]) = block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
    for (std::size_t q = 0; q < aligned_.size(); ++q) {
      const auto value = coupling(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(q));
      out(mixed_[a], aligned_[q]) = value;
      out(aligned_[q], mixed_[a]) = std::conj(value);
    }
  }
  for (std::size_t q = 0; q < aligned_.size(); ++q) {
    out(aligned_[q], aligned_[q]) = diagonal_[static_cast<Eigen::Index>(q)];
  }
  return out;
}

RankKernel::ArcValue RankKernel::largest(std::int64_t k, double skip_below) const {
  if (mixed_.empty()) return {diagonal_.size() == 0 ? 0.0 : diagonal_.maxCoeff(), false};
  Eigen::MatrixXcd block;
  Eigen::MatrixXcd coupling;
  assemble(k, block, coupling);
  const double block_top = top_eigenvalue(block);
  if (aligned_.empty()) return {block_top, false};
  const double value = secular_solve(block, coupling, diagonal_, block_top, skip_below);
  if (std::isnan(value)) return {skip_below, true};
  return {value, false};
}

IntensityResult carleson_intensity(const VectorSpectrum& spectrum, int max_rank,
                                   const ScanOptions& options) {
  if (max_rank < 0 || max_rank > kMaxScanRank) {
    throw DomainError("max_rank must lie in [0, " + std::to_string(kMaxScanRank) + "]");
  }
  IntensityResult result;
  result.max_rank = max_rank;
  result.remainder_bound = intensity_remainder_bound(spectrum, max_rank);
  if (spectrum.empty()) return result;

  const bool reflect = options.use_reflection && spectrum.all_real();
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
  std::atomic<double> running{0.0};
  long long evaluated = 0;
  // Ordering: larger value, then smaller rank, then smaller index.
  double best = -1.0;
  DyadicInterval best_arc{-1, 0};
  auto better = [](double v, const DyadicInterval& arc, double w, const DyadicInterval& other) {
    if (other.rank < 0) return true;
    if (v != w) return v > w;
    return arc < other;
  };

  for (int r = max_rank; r >= 0; --r) {
    const RankKernel kernel(spectrum, r, options);
    result.pruned_mass = std::max(result.pruned_mass, kernel.pruned_mass());
    const std::int64_t total = std::int64_t{1} << r;
    const std::int64_t limit = reflect && r > 0 ? total / 2 : total;

    double rank_best = -1.0;
    std::int64_t rank_arg = -1;
    long long rank_count = 0;
#pragma omp parallel num_threads(threads)
    {
      double local_best = -1.0;
      std::int64_t local_arg = -1;
      long long local_count = 0;
#pragma omp for schedule(dynamic, 64) nowait
      for (std::int64_t k = 0; k < limit; ++k) {
        // The margin keeps near-ties out of the skip test, so the witness does not
        // depend on which thread raised the running maximum first.
        const double floor =
            options.use_bounds ? running.load(std::memory_order_relaxed) * (1.0 - 1e-9) : 0.0;
        const auto arc = kernel.largest(k, floor);
        if (arc.skipped) continue;
        ++local_count;
        if (arc.value > local_best || (arc.value == local_best && k < local_arg)) {
          local_best = arc.value;
          local_arg = k;
          double seen = running.load(std::memory_order_relaxed);
          while (arc.value > seen &&
                 !running.compare_exchange_weak(seen, arc.value, std::memory_order_relaxed)) {
          }
        }
      }
#pragma omp critical(carleson_scan_merge)
      {
        rank_count += local_count;
        if (local_arg >= 0 &&
            (local_best > rank_best || (local_best == rank_best && local_arg < rank_arg))) {
          rank_best = local_best;
          rank_arg = local_arg;
        }
      }
    }
    evaluated += rank_count;
    const DyadicInterval arc{r, rank_arg};
    if (rank_arg >= 0 && better(rank_best, arc, best, best_arc)) {
      best = rank_best;
      best_arc = arc;
      result.witness = arc;
      result.value = largest_eigenvalue(HermitianForm{kernel.dense(rank_arg)});
    }
  }
  result.arcs_evaluated = evaluated;
  return result;
}

}  // namespace carleson
