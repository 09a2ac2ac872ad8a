#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "appendix.hpp"
#include "product_order.hpp"

using ordertau::exact::BigInt;
using ordertau::exact::Rational;
using ordertau::exact::SparsePoly;
using ordertau::exact::simplex_integral;
using namespace ordertau::appendix;

namespace {
Rational rat(long n, long d = 1) { return Rational(n, d); }
}

TEST_CASE("determinant polynomial family, small cases") {
  CHECK(det_poly(0) == SparsePoly::constant(0, rat(1)));
  CHECK(det_poly(1) == SparsePoly::variable(1, 1));
  const SparsePoly expected2 =
      SparsePoly::monomial(2, {1, 1}, rat(1)) + SparsePoly::monomial(2, {2, 0}, rat(-1, 2));
  CHECK(det_poly(2) == expected2);
  CHECK_THROWS_AS(det_poly(-1), std::invalid_argument);
}

TEST_CASE("family is homogeneous with value 1/n! at the upper corner") {
  for (int n = 1; n <= 8; ++n) {
    CHECK(det_poly(n).total_degree() == static_cast<unsigned>(n));
    const std::vector<Rational> ones(static_cast<std::size_t>(n), rat(1));
    CHECK(det_poly(n).eval(ones) ==
          Rational(BigInt(1L), BigInt::factorial(static_cast<unsigned long>(n))));
  }
}

TEST_CASE("pinned variants") {
  CHECK(det_poly_pinned(1, 1) == SparsePoly::constant(1, rat(1)));
  const SparsePoly expected21 =
      SparsePoly::variable(2, 1) + SparsePoly::monomial(2, {2, 0}, rat(-1, 2));
  CHECK(det_poly_pinned(2, 1) == expected21);
  // Fully pinned: the constant value at the upper corner.
  for (int n = 1; n <= 6; ++n)
    CHECK(det_poly_pinned(n, n) ==
          SparsePoly::constant(n, Rational(BigInt(1L), BigInt::factorial(static_cast<unsigned long>(n)))));
  CHECK_THROWS_AS(det_poly_pinned(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(det_poly_pinned(3, 4), std::invalid_argument);
}

TEST_CASE("partial integrals are the stated polynomials in the next variable") {
  for (int n = 1; n <= 8; ++n) CHECK(det_poly_partial_integral(n) == expected_partial_integral(n));
  for (int n = 1; n <= 8; ++n)
    for (int m = 1; m <= n; ++m)
      CHECK(det_poly_pinned_partial_integral(n, m) == expected_pinned_partial_integral(n, m));
}

TEST_CASE("integral values, hand-checked cases") {
  // n = 1, m = 1: integral of the constant 1 over [0,1].
  CHECK(pinned_integral_value(1, 1) == rat(1));
  // n = 2, m = 1: integral of u1 - u1^2/2 over the ordered triangle.
  CHECK(pinned_integral_value(2, 1) == rat(1, 8));
  CHECK(simplex_integral(det_poly_pinned(2, 1)) == rat(1, 8));
  // m = 0 boundary: 1/(n!(n+1)!).
  for (int n = 1; n <= 10; ++n)
    CHECK(integral_value(n) == Rational(BigInt(1L), BigInt::factorial(static_cast<unsigned long>(n)) *
                                                        BigInt::factorial(static_cast<unsigned long>(n + 1))));
}

TEST_CASE("single-sum closed form equals the double sum at the endpoint, to n = 10") {
  for (int n = 1; n <= 10; ++n) {
    for (int m = 1; m <= n; ++m) {
      const SparsePoly poly = expected_pinned_partial_integral(n, m);
      Rational at_one(0L);
      for (const auto& [e, c] : poly.terms()) at_one += c;
      CHECK(at_one == pinned_integral_value(n, m));
    }
  }
}

TEST_CASE("combinatorial identities, hand-evaluated seeds") {
  // First identity at n = 1: (1/(0-1)) C(2,1) C(0,0) + (1/1) C(0,0) C(2,1) = -2 + 2.
  const Rational first = rat(-1) * rat(2) + rat(1) * rat(2);
  CHECK(first == rat(0));
  // Third identity at n = 1: C(1,0) C(1,1) - C(1,1) C(2,2) = 1 - 1.
  CHECK(rat(1) * rat(1) - rat(1) * rat(1) == rat(0));
  // Empty-sum normalization of the ratio identity: C(y-z,0)/C(y,0) = 1.
  CHECK(ordertau::exact::binomial_rational(rat(7, 5), 0) == rat(1));
}

TEST_CASE("identity suite runs clean and is deterministic") {
  const auto report = check_combinatorial_identities(12, 8, 2024);
  CHECK(report.checks.size() == 4);
  CHECK(report.all_pass());
  const auto again = check_combinatorial_identities(12, 8, 2024);
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    CHECK(report.checks[i].name == again.checks[i].name);
    CHECK(report.checks[i].detail == again.checks[i].detail);
  }
  CHECK_THROWS_AS(check_combinatorial_identities(0, 5, 1), std::invalid_argument);
}

TEST_CASE("integral suite runs clean") {
  const auto report = check_integral_closed_forms(8);
  CHECK(report.all_pass());
  CHECK(report.checks.size() == 8);
  const auto extended = check_integral_closed_forms(10);
  CHECK(extended.all_pass());
  CHECK(extended.checks.size() == 10);  // 8 symbolic + 2 closed-form-only
}
