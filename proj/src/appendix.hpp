// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "poly.hpp"
#include "rational.hpp"
#include "report.hpp"

// The determinant polynomial family behind the order-statistic CDF, its
// pinned variants, and the combinatorial / integral identities they satisfy.
// det_poly(n) is the determinant of the n x n unit-subdiagonal Hessenberg
// matrix with entries u_i^(j-i+1)/(j-i+1)!; it equals the order-statistic
// CDF of n independent uniforms divided by n! on the ordered region.
namespace ordertau::appendix {

// Built from the minor-expansion recursion
//   det_n = sum_{i=1}^n (-1)^(i+n) u_i^(n-i+1)/(n-i+1)! det_{i-1},
// which is a different code path from the generic Hessenberg determinant
// used by product::order_statistic_cdf_poly. det_poly(0) = 1 in dimension 0.
// Memoized; safe for concurrent use.
const exact::SparsePoly& det_poly(int n);

// det_poly(n) with the last m variables pinned to 1, 1 <= m <= n; stays a
// polynomial in dimension n (the trailing variables no longer occur).
exact::SparsePoly det_poly_pinned(int n, int m);

// (n-fold) iterated integral of det_poly(n) over 0 <= u_1 <= ... <= u_n <=
// u_{n+1}, left as a polynomial in u_{n+1} (dimension n+1). Closed form:
// u_{n+1}^(2n) / (n! (n+1)!).
exact::SparsePoly det_poly_partial_integral(int n);
exact::SparsePoly det_poly_pinned_partial_integral(int n, int m);

// Closed forms the partial integrals must match.
exact::SparsePoly expected_partial_integral(int n);                // u^(2n)/(n!(n+1)!)
exact::SparsePoly expected_pinned_partial_integral(int n, int m);  // double binomial sum
exact::Rational integral_value(int n);                             // 1/(n!(n+1)!)
exact::Rational pinned_integral_value(int n, int m);               // single binomial sum, m >= 0

// Exact verification of the four binomial identities used by the closed
// forms, for all n <= n_max; the one with free rational parameters (y, z)
// gets `trials` random samples per n. Deterministic in `seed`.
CheckReport check_combinatorial_identities(int n_max, int trials, std::uint64_t seed);

// Compares the symbolic simplex integral of the pinned family against both
// closed forms for n <= min(n_max, 8), all m in 0..n, and the two closed
// forms against each other for all n <= n_max.
CheckReport check_integral_closed_forms(int n_max);

}  // namespace ordertau::appendix
