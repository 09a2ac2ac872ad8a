// SPDX-License-Identifier: Apache-2.0
#include "mc.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rng.hpp"

namespace ordertau::lab {

using exact::Rational;

namespace {

constexpr std::uint64_t kBlockTrials = 4096;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

int clamp_threads(int threads) {
  require(threads >= 1 && threads <= 256, "thread count must lie in 1..256");
  return threads;
}

// Runs fn(block_index) for every block on `threads` workers. Blocks carry
// their own RNG substreams and write to disjoint slots, so scheduling order
// cannot influence results.
void run_blocks(std::uint64_t block_count, int threads, const std::function<void(std::uint64_t)>& fn) {
  if (threads == 1 || block_count <= 1) {
    for (std::uint64_t b = 0; b < block_count; ++b) fn(b);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= block_count) return;
      fn(b);
    }
  };
  std::vector<std::thread> pool;
  const int workers = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), block_count));
  pool.reserve(static_cast<std::size_t>(workers));
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

double binomial_std_error(double p, std::uint64_t n) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

bool dominates(std::span<const double> upper, std::span<const double> lower, std::span<const int> idx) {
  for (int i : idx)
    if (lower[static_cast<std::size_t>(i - 1)] > upper[static_cast<std::size_t>(i - 1)]) return false;
  return true;
}

std::vector<int> compare_indices(int d, const std::optional<product::SubsetK>& margin) {
  if (!margin) {
    std::vector<int> idx(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
    return idx;
  }
  require(margin->d == d, "margin subset dimension does not match the model");
  return margin->members;
}

}  // namespace

Estimate estimate_bracket(const CopulaModel& model, std::uint64_t n, std::uint64_t seed,
                          bool order_transform, const std::optional<product::SubsetK>& margin,
                          int threads) {
  require(n >= 1000, "bracket estimation needs at least 1000 sample pairs");
  const int workers = clamp_threads(threads);
  const int d = model.dimension();
  const std::vector<int> idx = compare_indices(d, margin);
  const CompiledSampler sampler(model);

  const std::uint64_t blocks = (n + kBlockTrials - 1) / kBlockTrials;
  std::vector<std::uint64_t> hits(blocks, 0);

  run_blocks(blocks, workers, [&](std::uint64_t b) {
    Xoshiro256ss rng(seed, b);
    auto unif = [&rng] { return rng.uniform(); };
    const std::uint64_t lo = b * kBlockTrials;
    const std::uint64_t hi = std::min(n, lo + kBlockTrials);
    std::vector<double> u(static_cast<std::size_t>(d)), v(static_cast<std::size_t>(d));
    std::uint64_t count = 0;
    for (std::uint64_t t = lo; t < hi; ++t) {
      sampler(unif, u);
      sampler(unif, v);
      if (order_transform) {
        order_transform_point(u);
        order_transform_point(v);
      }
      if (dominates(u, v, idx)) ++count;
    }
    hits[b] = count;
  });

  std::uint64_t total = 0;
  for (std::uint64_t h : hits) total += h;
  Estimate est;
  est.value = static_cast<double>(total) / static_cast<double>(n);
  est.std_error = binomial_std_error(est.value, n);
  est.n = n;
  est.seed = seed;
  est.order_transform = order_transform;
  est.margin = margin;
  return est;
}

namespace {

KendallCurve accumulate_curve(const CopulaModel& model, std::uint64_t n, std::uint64_t seed,
                              const CurveStatistic& stat, std::vector<double> grid, int workers) {
  const int d = model.dimension();
  const CompiledSampler sampler(model);
  const std::size_t g = grid.size();
  const std::uint64_t blocks = (n + kBlockTrials - 1) / kBlockTrials;
  std::vector<std::vector<std::uint64_t>> buckets(blocks);

  run_blocks(blocks, workers, [&](std::uint64_t b) {
    Xoshiro256ss rng(seed, b);
    auto unif = [&rng] { return rng.uniform(); };
    const std::uint64_t lo = b * kBlockTrials;
    const std::uint64_t hi = std::min(n, lo + kBlockTrials);
    std::vector<std::uint64_t> local(g + 1, 0);
    std::vector<double> u(static_cast<std::size_t>(d));
    for (std::uint64_t t = lo; t < hi; ++t) {
      sampler(unif, u);
      const double s = stat(u);
      // First grid index with grid[i] >= s; draws above the last point fall
      // into the overflow slot.
      const auto it = std::lower_bound(grid.begin(), grid.end(), s);
      local[static_cast<std::size_t>(it - grid.begin())] += 1;
    }
    buckets[b] = std::move(local);
  });

  std::vector<std::uint64_t> totals(g + 1, 0);
  for (const auto& local : buckets)
    for (std::size_t i = 0; i <= g; ++i) totals[i] += local[i];

  KendallCurve curve;
  curve.grid = std::move(grid);
  curve.values.resize(g);
  curve.std_errors.resize(g);
  curve.n = n;
  curve.seed = seed;
  std::uint64_t below = 0;
  for (std::size_t i = 0; i < g; ++i) {
    below += totals[i];
    curve.values[i] = static_cast<double>(below) / static_cast<double>(n);
    curve.std_errors[i] = binomial_std_error(curve.values[i], n);
  }
  return curve;
}

}  // namespace

KendallCurve estimate_kendall_curve(const CopulaModel& model, std::uint64_t n, std::uint64_t seed,
                                    bool order_transform, std::vector<double> grid, int threads) {
  require(n >= 2, "curve estimation needs at least 2 samples");
  require(!grid.empty(), "empty evaluation grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(grid[i] >= 0.0 && grid[i] <= 1.0, "grid values must lie in [0,1]");
    if (i) require(grid[i - 1] < grid[i], "grid values must be strictly increasing");
  }
  const CurveStatistic stat(model, order_transform);
  return accumulate_curve(model, n, seed, stat, std::move(grid), clamp_threads(threads));
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Exact bracket targets where the model admits them; {raw, transformed}.
struct ExactTargets {
  std::optional<Rational> raw;
  std::optional<Rational> transformed;
};

ExactTargets exact_bracket_targets(const CopulaModel& model) {
  ExactTargets out;
  const auto& v = model.variant();
  const int d = model.dimension();
  if (std::holds_alternative<ProductCopula>(v)) {
    out.raw = Rational(exact::BigInt(1L), exact::BigInt::pow2(static_cast<unsigned long>(d)));
    if (d <= product::kMaxSymbolicDimension) out.transformed = Rational(1L, d + 1L);
    return out;
  }
  if (std::holds_alternative<FrechetMCopula>(v)) {
    out.raw = Rational(1L, 2L);
    out.transformed = Rational(1L, 2L);  // the comonotone copula is its own order transform
    return out;
  }
  if (const auto* s = std::get_if<ShuffleOfM>(&v)) {
    out.raw = shuffle_bracket(*s);
    if (shuffle_is_exchangeable(*s)) out.transformed = shuffle_order_bracket(*s);
    return out;
  }
  if (const auto wm = mw_mixture_weight(model)) {
    // [C,C] = wm^2 [M,M] + 2 wm ww [M,W] + ww^2 [W,W] = wm/2, and the
    // diagonal integral equals the same value, so the transformed bracket
    // is wm/2 as well.
    out.raw = *wm * Rational(1L, 2L);
    out.transformed = out.raw;
    return out;
  }
  return out;
}

}  // namespace

CheckReport verify_order_theorems(const CopulaModel& model, std::uint64_t n, std::uint64_t seed,
                                  int grid_points, double value_sigmas, double ineq_sigmas,
                                  int threads) {
  require(n >= 1000, "order-theorem verification needs at least 1000 sample pairs");
  require(grid_points >= 1 && grid_points <= 4096, "grid point count out of range");
  require(value_sigmas > 0 && ineq_sigmas > 0, "sigma thresholds must be positive");
  const int workers = clamp_threads(threads);
  const int d = model.dimension();
  CheckReport report;

  // Paired bracket estimates: each trial scores the raw and the sorted
  // comparison on the same draws.
  const CompiledSampler sampler(model);
  const std::uint64_t blocks = (n + kBlockTrials - 1) / kBlockTrials;
  std::vector<std::uint64_t> raw_hits(blocks, 0), ord_hits(blocks, 0);
  const std::uint64_t pair_seed = derived_seed(seed, 1);
  std::vector<int> all(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) all[static_cast<std::size_t>(i)] = i + 1;

  run_blocks(blocks, workers, [&](std::uint64_t b) {
    Xoshiro256ss rng(pair_seed, b);
    auto unif = [&rng] { return rng.uniform(); };
    const std::uint64_t lo = b * kBlockTrials;
    const std::uint64_t hi = std::min(n, lo + kBlockTrials);
    std::vector<double> u(static_cast<std::size_t>(d)), v(static_cast<std::size_t>(d));
    std::uint64_t raw = 0, ord = 0;
    for (std::uint64_t t = lo; t < hi; ++t) {
      sampler(unif, u);
      sampler(unif, v);
      if (dominates(u, v, all)) ++raw;
      order_transform_point(u);
      order_transform_point(v);
      if (dominates(u, v, all)) ++ord;
    }
    raw_hits[b] = raw;
    ord_hits[b] = ord;
  });

  std::uint64_t raw_total = 0, ord_total = 0;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    raw_total += raw_hits[b];
    ord_total += ord_hits[b];
  }
  const double b_raw = static_cast<double>(raw_total) / static_cast<double>(n);
  const double b_ord = static_cast<double>(ord_total) / static_cast<double>(n);
  const double se_raw = binomial_std_error(b_raw, n);
  const double se_ord = binomial_std_error(b_ord, n);

  // kappa is affine in the bracket, so its standard error scales by the
  // same factor.
  const double scale = std::pow(2.0, d) / (std::pow(2.0, d - 1) - 1.0);
  const double kappa_raw = (std::pow(2.0, d) * b_raw - 1.0) / (std::pow(2.0, d - 1) - 1.0);
  const double kappa_ord = (std::pow(2.0, d) * b_ord - 1.0) / (std::pow(2.0, d - 1) - 1.0);
  const double se_comb = scale * std::sqrt(se_raw * se_raw + se_ord * se_ord);
  report.add("kappa-not-decreased", kappa_raw <= kappa_ord + ineq_sigmas * se_comb,
             "kappa_hat[C]=" + fmt(kappa_raw) + " <= kappa_hat[C_T]=" + fmt(kappa_ord) + " + " +
                 fmt(ineq_sigmas) + "*" + fmt(se_comb));

  const ExactTargets targets = exact_bracket_targets(model);
  if (targets.raw) {
    const double t = targets.raw->to_double();
    report.add("bracket-matches-exact", std::abs(b_raw - t) <= value_sigmas * se_raw,
               "estimate " + fmt(b_raw) + " vs exact " + targets.raw->str() + " within " +
                   fmt(value_sigmas) + " std errors");
  }
  if (targets.transformed) {
    const double t = targets.transformed->to_double();
    report.add("order-bracket-matches-exact", std::abs(b_ord - t) <= value_sigmas * se_ord,
               "estimate " + fmt(b_ord) + " vs exact " + targets.transformed->str() + " within " +
                   fmt(value_sigmas) + " std errors");
  }

  // Kendall curves on a shared sample, where both statistics have closed
  // forms.
  bool curves_supported = true;
  try {
    CurveStatistic probe(model, true);
    (void)probe;
  } catch (const unsupported_error&) {
    curves_supported = false;
  }
  if (curves_supported) {
    std::vector<double> grid(static_cast<std::size_t>(grid_points));
    for (int i = 1; i <= grid_points; ++i)
      grid[static_cast<std::size_t>(i - 1)] = static_cast<double>(i) / (grid_points + 1.0);
    const CurveStatistic stat_plain(model, false);
    const CurveStatistic stat_order(model, true);
    const std::uint64_t curve_seed = derived_seed(seed, 2);
    const std::size_t g = grid.size();
    std::vector<std::vector<std::uint64_t>> buckets_plain(blocks), buckets_order(blocks);

    run_blocks(blocks, workers, [&](std::uint64_t b) {
      Xoshiro256ss rng(curve_seed, b);
      auto unif = [&rng] { return rng.uniform(); };
      const std::uint64_t lo = b * kBlockTrials;
      const std::uint64_t hi = std::min(n, lo + kBlockTrials);
      std::vector<std::uint64_t> plain_counts(g + 1, 0), order_counts(g + 1, 0);
      std::vector<double> u(static_cast<std::size_t>(d)), scratch(static_cast<std::size_t>(d));
      for (std::uint64_t t = lo; t < hi; ++t) {
        sampler(unif, u);
        std::copy(u.begin(), u.end(), scratch.begin());
        const double sp = stat_plain(scratch);
        std::copy(u.begin(), u.end(), scratch.begin());
        const double so = stat_order(scratch);
        plain_counts[static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), sp) - grid.begin())] += 1;
        order_counts[static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), so) - grid.begin())] += 1;
      }
      buckets_plain[b] = std::move(plain_counts);
      buckets_order[b] = std::move(order_counts);
    });

    std::vector<std::uint64_t> tp(g + 1, 0), to(g + 1, 0);
    for (std::uint64_t b = 0; b < blocks; ++b)
      for (std::size_t i = 0; i <= g; ++i) {
        tp[i] += buckets_plain[b][i];
        to[i] += buckets_order[b][i];
      }
    bool ok = true;
    double worst = -std::numeric_limits<double>::infinity();
    std::uint64_t below_p = 0, below_o = 0;
    for (std::size_t i = 0; i < g; ++i) {
      below_p += tp[i];
      below_o += to[i];
      const double kp = static_cast<double>(below_p) / static_cast<double>(n);
      const double ko = static_cast<double>(below_o) / static_cast<double>(n);
      const double joint =
          std::sqrt(std::pow(binomial_std_error(kp, n), 2) + std::pow(binomial_std_error(ko, n), 2));
      const double slack = ko - (kp + ineq_sigmas * joint);
      worst = std::max(worst, slack);
      if (slack > 0) ok = false;
    }
    report.add("kendall-curve-not-increased", ok,
               std::to_string(g) + " grid points, max(K_hat[C_T] - K_hat[C] - " + fmt(ineq_sigmas) +
                   "*joint se) = " + fmt(worst));
  }

  return report;
}

}  // namespace ordertau::lab
