// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "poly.hpp"
#include "rational.hpp"
#include "report.hpp"

// Exact Kendall's tau machinery for the order statistic of d independent
// uniforms: the joint distribution function of the sorted sample as a
// polynomial on the ordered region, concordance brackets of coordinate
// margins by exact simplex integration, closed forms for lower-tail margins,
// and the index-reflection symmetry.
namespace ordertau::product {

// Coordinate subset K of {1..d} with at least two members, sorted ascending.
struct SubsetK {
  int d;
  std::vector<int> members;

  SubsetK(int d, std::vector<int> members);
  bool full() const { return static_cast<int>(members.size()) == d; }
};

// Symbolic simplex integration keeps every intermediate polynomial exact;
// term growth makes it impractical past this dimension, so it is refused
// rather than silently truncated.
inline constexpr int kMaxSymbolicDimension = 8;
// Closed-form summations stay cheap far beyond this, but the CLI table and
// related entry points are capped where the artifact is meant to operate.
inline constexpr int kMaxClosedFormDimension = 12;

// Joint distribution function of the sorted sample of d independent
// uniforms, valid on {u_1 <= ... <= u_d}: d! times the determinant of the
// unit-subdiagonal Hessenberg matrix with entries u_i^(j-i+1)/(j-i+1)!.
// Memoized; safe for concurrent use. 1 <= d <= kMaxSymbolicDimension.
const exact::SparsePoly& order_statistic_cdf_poly(int d);

// Rewrites the point that is 1 outside K and u_k inside K into nondecreasing
// arguments: on the ordered region, each coordinate j outside K can be
// replaced by the smallest member of K above j (the sorted sample makes the
// constraint at j redundant), or by 1 when no member lies above j. Returns a
// map of length d: 1-based variable index, or 0 for the constant 1.
std::vector<int> envelope_substitution(const SubsetK& k);

// Concordance bracket of the K-margin of the order-statistic copula,
// d! * integral of the substituted CDF polynomial over the ordered region.
// Exact; requires k.d <= kMaxSymbolicDimension.
exact::Rational bracket_margin(const SubsetK& k);

// kappa = (2^m b - 1) / (2^(m-1) - 1) for a bracket b in [0,1/2], m >= 2.
exact::Rational kappa_from_bracket(const exact::Rational& bracket, int m);

// Kendall's tau of the full order-statistic copula:
// (2^d - (d+1)) / ((2^(d-1) - 1)(d+1)), d >= 2.
exact::Rational kappa_product_order(int d);

// Bracket of the {1..k}-margin by two independent closed-form summations;
// they must agree exactly, anything else throws std::logic_error.
exact::Rational bracket_lower_tail(int d, int k);
exact::Rational kappa_lower_tail(int d, int k);

// Limit of kappa_lower_tail(d, k) as d grows, exact.
exact::Rational kappa_lower_tail_limit(int k);

// Mirrors K through i -> d - i + 1 and re-sorts ascending. Brackets and tau
// of the order-statistic margins are invariant under this map.
SubsetK reflect_subset(const SubsetK& k);

// Suites behind `verify --suite reflection` / `--suite monotonicity`.
CheckReport check_reflection(int d_max);
CheckReport check_monotonicity(int d_max, int k_max);

}  // namespace ordertau::product
