#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <thread>
#include <vector>

#include "appendix.hpp"
#include "product_order.hpp"

using ordertau::exact::BigInt;
using ordertau::exact::Rational;
using ordertau::exact::SparsePoly;
using ordertau::exact::simplex_integral;
using namespace ordertau::product;

namespace {

Rational rat(long n, long d = 1) { return Rational(n, d); }

std::vector<int> iota_subset(int k) {
  std::vector<int> v(static_cast<std::size_t>(k));
  std::iota(v.begin(), v.end(), 1);
  return v;
}

}  // namespace

// Runs first: the memo table must fill correctly under contention.
TEST_CASE("memoized CDF polynomial is identical under concurrent first use") {
  std::vector<SparsePoly> results(8, SparsePoly(0));
  std::vector<std::thread> pool;
  for (int i = 0; i < 8; ++i)
    pool.emplace_back([&results, i] { results[static_cast<std::size_t>(i)] = order_statistic_cdf_poly(7); });
  for (auto& t : pool) t.join();
  for (int i = 1; i < 8; ++i) CHECK(results[static_cast<std::size_t>(i)] == results[0]);
}

TEST_CASE("subset validation") {
  CHECK_NOTHROW(SubsetK(5, {1, 2, 3, 5}));
  CHECK_THROWS_AS(SubsetK(2, {2}), std::invalid_argument);      // too small
  CHECK_THROWS_AS(SubsetK(3, {2, 2}), std::invalid_argument);   // not strictly increasing
  CHECK_THROWS_AS(SubsetK(3, {0, 2}), std::invalid_argument);   // out of range
  CHECK_THROWS_AS(SubsetK(3, {2, 4}), std::invalid_argument);   // out of range
}

TEST_CASE("sorted-sample CDF polynomial") {
  // d = 2: 2 u1 u2 - u1^2, from the 2x2 determinant expanded by hand.
  const SparsePoly expected =
      SparsePoly::monomial(2, {1, 1}, rat(2)) + SparsePoly::monomial(2, {2, 0}, rat(-1));
  CHECK(order_statistic_cdf_poly(2) == expected);

  // Distribution function equals 1 at the upper corner.
  for (int d = 1; d <= 6; ++d) {
    const std::vector<Rational> ones(static_cast<std::size_t>(d), rat(1));
    CHECK(order_statistic_cdf_poly(d).eval(ones) == rat(1));
  }

  // d! times the simplex integral is 1/(d+1).
  CHECK(simplex_integral(order_statistic_cdf_poly(3)) * Rational(BigInt::factorial(3)) == rat(1, 4));

  CHECK_THROWS_AS(order_statistic_cdf_poly(9), std::invalid_argument);  // symbolic cap
  CHECK_THROWS_AS(order_statistic_cdf_poly(0), std::invalid_argument);
}

TEST_CASE("CDF polynomial equals the factorial multiple of the determinant family") {
  // Two independent construction paths: generic Hessenberg determinant of
  // the symbolic matrix vs the direct minor-expansion recursion.
  for (int n = 1; n <= 8; ++n) {
    const SparsePoly lhs = order_statistic_cdf_poly(n);
    const SparsePoly rhs =
        ordertau::appendix::det_poly(n).scaled(Rational(BigInt::factorial(static_cast<unsigned long>(n))));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("envelope substitution") {
  CHECK(envelope_substitution(SubsetK(5, {1, 2, 3, 5})) == std::vector<int>{1, 2, 3, 5, 5});
  CHECK(envelope_substitution(SubsetK(4, {1, 2, 3, 4})) == std::vector<int>{1, 2, 3, 4});
  CHECK(envelope_substitution(SubsetK(3, {1, 3})) == std::vector<int>{1, 3, 3});
  // Trailing coordinates outside K become the constant 1.
  CHECK(envelope_substitution(SubsetK(4, {1, 2})) == std::vector<int>{1, 2, 0, 0});
}

TEST_CASE("margin brackets by exact integration") {
  CHECK(bracket_margin(SubsetK(5, {1, 2, 3, 5})) == rat(47, 252));
  CHECK(bracket_margin(SubsetK(5, {1, 2, 3})) == rat(71, 252));
  for (int d = 2; d <= 6; ++d)
    CHECK(bracket_margin(SubsetK(d, iota_subset(d))) == Rational(1, d + 1L));
}

TEST_CASE("kappa from bracket") {
  for (int m = 2; m <= 6; ++m) {
    CHECK(kappa_from_bracket(rat(1, 2), m) == rat(1));
    CHECK(kappa_from_bracket(Rational(BigInt(1L), BigInt::pow2(static_cast<unsigned long>(m))), m) == rat(0));
  }
  CHECK(kappa_from_bracket(rat(47, 252), 4) == rat(125, 441));
  CHECK_THROWS_AS(kappa_from_bracket(rat(1, 4), 1), std::invalid_argument);
  CHECK_THROWS_AS(kappa_from_bracket(rat(3, 4), 3), std::invalid_argument);
  CHECK_THROWS_AS(kappa_from_bracket(rat(-1, 4), 3), std::invalid_argument);
}

TEST_CASE("tau of the full order transform") {
  CHECK(kappa_product_order(2) == rat(1, 3));
  CHECK(kappa_product_order(3) == rat(1, 3));
  CHECK(kappa_product_order(5) == rat(13, 45));
  CHECK(kappa_product_order(5) == rat(273, 945));
  for (int d = 2; d <= 7; ++d)
    CHECK(kappa_product_order(d) == kappa_from_bracket(bracket_margin(SubsetK(d, iota_subset(d))), d));
  CHECK_THROWS_AS(kappa_product_order(1), std::invalid_argument);
  CHECK_THROWS_AS(kappa_product_order(13), std::invalid_argument);
}

TEST_CASE("lower-tail closed forms") {
  CHECK(kappa_lower_tail(5, 2) == rat(4, 9));
  CHECK(kappa_lower_tail(5, 2) == rat(420, 945));
  CHECK(kappa_lower_tail(5, 3) == rat(79, 189));
  CHECK(kappa_lower_tail(5, 3) == rat(395, 945));
  CHECK(kappa_lower_tail(4, 4) == rat(297, 945));
  CHECK(kappa_lower_tail(4, 4) == kappa_product_order(4));
  CHECK(bracket_lower_tail(5, 3) == rat(71, 252));
  CHECK_THROWS_AS(kappa_lower_tail(5, 1), std::invalid_argument);
  CHECK_THROWS_AS(kappa_lower_tail(5, 6), std::invalid_argument);
  CHECK_THROWS_AS(kappa_lower_tail(13, 2), std::invalid_argument);
}

TEST_CASE("closed forms agree with the bracket-integration route") {
  for (int d = 2; d <= 7; ++d)
    for (int k = 2; k <= d; ++k) {
      const Rational via_integration = kappa_from_bracket(bracket_margin(SubsetK(d, iota_subset(k))), k);
      CHECK(kappa_lower_tail(d, k) == via_integration);
      CHECK(bracket_lower_tail(d, k) == bracket_margin(SubsetK(d, iota_subset(k))));
    }
}

TEST_CASE("limits of the lower-tail tau") {
  CHECK(kappa_lower_tail_limit(2) == rat(1, 2));
  // Frozen from exact evaluation of the closed-form sum:
  // 1 - (2/3)(1/2 + 1/4) = 1/2.
  CHECK(kappa_lower_tail_limit(3) == rat(1, 2));
  CHECK(kappa_lower_tail_limit(4) == rat(27, 56));
  CHECK(kappa_lower_tail_limit(5) == rat(11, 24));
  // (d-1)/(2d-1) stays below its limit 1/2.
  for (int d = 2; d <= 12; ++d) {
    CHECK(kappa_lower_tail(d, 2) == Rational(d - 1L, 2L * d - 1));
    CHECK(kappa_lower_tail(d, 2) < rat(1, 2));
  }
  CHECK_THROWS_AS(kappa_lower_tail_limit(1), std::invalid_argument);
}

TEST_CASE("subset reflection") {
  CHECK(reflect_subset(SubsetK(5, {1, 2, 3, 5})).members == std::vector<int>{1, 3, 4, 5});
  CHECK(reflect_subset(SubsetK(5, {1, 2})).members == std::vector<int>{4, 5});
  CHECK(reflect_subset(SubsetK(4, {1, 4})).members == std::vector<int>{1, 4});
}

TEST_CASE("brackets are invariant under reflection, all subsets to d = 6") {
  int checked = 0;
  for (int d = 2; d <= 6; ++d) {
    for (unsigned mask = 0; mask < (1U << d); ++mask) {
      std::vector<int> members;
      for (int i = 1; i <= d; ++i)
        if (mask & (1U << (i - 1))) members.push_back(i);
      if (members.size() < 2) continue;
      const SubsetK k(d, members);
      CHECK(bracket_margin(k) == bracket_margin(reflect_subset(k)));
      ++checked;
    }
  }
  CHECK(checked == 1 + 4 + 11 + 26 + 57);
}

TEST_CASE("monotonicity and bounds of the closed forms") {
  for (int d = 2; d <= 7; ++d)
    for (int k = 3; k <= d; ++k) CHECK(kappa_lower_tail(d, k) < kappa_lower_tail(d, k - 1));

  for (int k = 2; k <= 5; ++k) {
    const Rational limit = kappa_lower_tail_limit(k);
    for (int d = k; d <= 10; ++d) {
      if (d > k) CHECK(kappa_lower_tail(d - 1, k) < kappa_lower_tail(d, k));
      CHECK(kappa_lower_tail(d, k) < limit);
    }
  }

  for (int d = 2; d <= 7; ++d)
    for (int k = 2; k <= d; ++k) {
      const Rational kappa = kappa_lower_tail(d, k);
      const Rational lower_bound =
          -(Rational(BigInt::pow2(static_cast<unsigned long>(k - 1))) - rat(1)).reciprocal();
      CHECK(lower_bound <= kappa);
      CHECK(kappa <= rat(1));
    }

  Rational prev = kappa_product_order(2);
  CHECK(rat(0) < prev);
  for (int d = 3; d <= 10; ++d) {
    const Rational cur = kappa_product_order(d);
    CHECK(rat(0) < cur);
    CHECK(cur <= prev);
    prev = cur;
  }
}

TEST_CASE("verification suites pass") {
  CHECK(check_reflection(5).all_pass());
  CHECK(check_monotonicity(7, 5).all_pass());
  CHECK_THROWS_AS(check_reflection(9), std::invalid_argument);
}
