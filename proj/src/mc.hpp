// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "copula.hpp"
#include "product_order.hpp"
#include "report.hpp"

// Monte Carlo estimation of concordance brackets and Kendall distribution
// functions. Work is split into fixed-size blocks of trials; block i uses
// the generator substream (seed, i) and blocks are merged by integer
// addition, so results are bit-identical for every thread count.
namespace ordertau::lab {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  bool order_transform = false;
  std::optional<product::SubsetK> margin;
};

struct KendallCurve {
  std::vector<double> grid;
  std::vector<double> values;      // nondecreasing, in [0,1]
  std::vector<double> std_errors;  // binomial, per grid point
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

// Fraction of independent sample pairs (U, V) with V <= U on the compared
// coordinates: estimates [C,C]; [C_T,C_T] under the order transform; the
// margin bracket when a coordinate subset is given. n >= 1000.
Estimate estimate_bracket(const CopulaModel& model, std::uint64_t n, std::uint64_t seed,
                          bool order_transform, const std::optional<product::SubsetK>& margin,
                          int threads);

// Empirical CDF of the Kendall statistic on an increasing grid in [0, 1].
KendallCurve estimate_kendall_curve(const CopulaModel& model, std::uint64_t n, std::uint64_t seed,
                                    bool order_transform, std::vector<double> grid, int threads);

// Statistical verification that the order transform does not decrease
// Kendall's tau and does not increase the Kendall distribution function.
// Raw and transformed statistics are evaluated on the same draws, so the
// estimated inequalities hold pathwise and the sigma terms only guard the
// exact-value comparisons against known targets.
CheckReport verify_order_theorems(const CopulaModel& model, std::uint64_t n, std::uint64_t seed,
                                  int grid_points, double value_sigmas, double ineq_sigmas,
                                  int threads);

}  // namespace ordertau::lab
