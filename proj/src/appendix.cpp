// SPDX-License-Identifier: Apache-2.0
#include "appendix.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "rng.hpp"

namespace ordertau::appendix {

using exact::BigInt;
using exact::ExponentVec;
using exact::Rational;
using exact::SparsePoly;

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Rational int_binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return Rational(0L);
  return Rational(BigInt::binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(k)));
}

}  // namespace

const SparsePoly& det_poly(int n) {
  require(n >= 0, "index must be nonnegative");
  require(n <= 12, "determinant family supported up to n = 12");
  static std::mutex mu;
  static std::map<int, SparsePoly> memo;
  std::lock_guard lock(mu);
  if (const auto it = memo.find(n); it != memo.end()) return it->second;

  // Fill the memo bottom-up so each level can reuse the previous ones.
  if (memo.find(0) == memo.end()) memo.emplace(0, SparsePoly::constant(0, Rational(1L)));
  for (int m = 1; m <= n; ++m) {
    if (memo.find(m) != memo.end()) continue;
    SparsePoly acc(m);
    for (int i = 1; i <= m; ++i) {
      const unsigned p = static_cast<unsigned>(m - i + 1);
      ExponentVec e(static_cast<std::size_t>(m), 0U);
      e[static_cast<std::size_t>(i - 1)] = p;
      Rational c(BigInt(1L), BigInt::factorial(p));
      if ((i + m) % 2 == 1) c = -c;
      acc += SparsePoly::monomial(m, std::move(e), std::move(c)) * memo.at(i - 1).promoted(m);
    }
    memo.emplace(m, std::move(acc));
  }
  return memo.at(n);
}

SparsePoly det_poly_pinned(int n, int m) {
  require(n >= 1, "index must be at least 1");
  require(m >= 1 && m <= n, "pin count must lie in 1..n");
  std::vector<int> target(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) target[static_cast<std::size_t>(i - 1)] = i <= n - m ? i : 0;
  return det_poly(n).substitute(target);
}

namespace {

SparsePoly partial_integral_of(SparsePoly p, int n) {
  SparsePoly q = p.promoted(n + 1);
  for (int var = 1; var <= n; ++var) q = q.integrate_step(var);
  return q;
}

}  // namespace

SparsePoly det_poly_partial_integral(int n) {
  require(n >= 1, "index must be at least 1");
  return partial_integral_of(det_poly(n), n);
}

SparsePoly det_poly_pinned_partial_integral(int n, int m) {
  return partial_integral_of(det_poly_pinned(n, m), n);
}

SparsePoly expected_partial_integral(int n) {
  require(n >= 1, "index must be at least 1");
  ExponentVec e(static_cast<std::size_t>(n + 1), 0U);
  e[static_cast<std::size_t>(n)] = static_cast<unsigned>(2 * n);
  const Rational c(BigInt(1L), BigInt::factorial(static_cast<unsigned long>(n)) *
                                   BigInt::factorial(static_cast<unsigned long>(n + 1)));
  return SparsePoly::monomial(n + 1, std::move(e), c);
}

SparsePoly expected_pinned_partial_integral(int n, int m) {
  require(n >= 1 && m >= 1 && m <= n, "indices out of range");
  SparsePoly out(n + 1);
  const Rational inv_fact_2n(BigInt(1L), BigInt::factorial(2UL * static_cast<unsigned long>(n)));
  for (int l = 0; l <= m; ++l) {
    Rational inner(0L);
    for (int h = 0; h <= m - l; ++h) {
      Rational term = int_binomial(2L * n - 2L * l - h, n - l) * int_binomial(n - l + 1, h);
      if (h % 2 == 1) term = -term;
      inner += term;
    }
    Rational coeff = inv_fact_2n * int_binomial(2L * n, l) * inner / Rational(static_cast<long>(n - l + 1));
    ExponentVec e(static_cast<std::size_t>(n + 1), 0U);
    e[static_cast<std::size_t>(n)] = static_cast<unsigned>(2 * n - l);
    out += SparsePoly::monomial(n + 1, std::move(e), std::move(coeff));
  }
  return out;
}

Rational integral_value(int n) {
  require(n >= 0, "index must be nonnegative");
  return Rational(BigInt(1L), BigInt::factorial(static_cast<unsigned long>(n)) *
                                  BigInt::factorial(static_cast<unsigned long>(n + 1)));
}

Rational pinned_integral_value(int n, int m) {
  require(n >= 1, "index must be at least 1");
  require(m >= 0 && m <= n, "pin count must lie in 0..n");
  Rational acc = integral_value(n);
  const Rational inv_fact_2n(BigInt(1L), BigInt::factorial(2UL * static_cast<unsigned long>(n)));
  for (int k = 1; k <= m; ++k) {
    Rational term(BigInt::factorial(static_cast<unsigned long>(2 * (n - k))));
    term /= Rational(BigInt::factorial(static_cast<unsigned long>(n - k)));
    term /= Rational(BigInt::factorial(static_cast<unsigned long>(n + 1 - k)));
    term *= int_binomial(2L * k - 1L, k);
    acc += inv_fact_2n * term;
  }
  return acc;
}

namespace {

// Identity 1: sum_{k=0}^n C(2n-2k, n-k) C(2k, k) / (2k-1) = 0.
bool identity_central_binomial(int n) {
  Rational acc(0L);
  for (int k = 0; k <= n; ++k) {
    Rational term = int_binomial(2L * (n - k), n - k) * int_binomial(2L * k, k);
    term /= Rational(2L * k - 1L);
    acc += term;
  }
  return acc.is_zero();
}

// Identity 2: sum_{k=0}^n (-1)^k C(n,k) C(z,k)/C(y,k) = C(y-z,n)/C(y,n),
// with rational y chosen so no denominator binomial vanishes.
bool identity_binomial_ratio(int n, const Rational& y, const Rational& z) {
  Rational acc(0L);
  for (int k = 0; k <= n; ++k) {
    Rational term = int_binomial(n, k) * binomial_rational(z, static_cast<unsigned long>(k));
    term /= binomial_rational(y, static_cast<unsigned long>(k));
    if (k % 2 == 1) term = -term;
    acc += term;
  }
  const Rational rhs = binomial_rational(y - z, static_cast<unsigned long>(n)) /
                       binomial_rational(y, static_cast<unsigned long>(n));
  return acc == rhs;
}

// Identity 3: sum_{k=0}^n (-1)^k C(n,k) C(n+k, k+1) = 0.
bool identity_alternating_a(int n) {
  Rational acc(0L);
  for (int k = 0; k <= n; ++k) {
    Rational term = int_binomial(n, k) * int_binomial(n + k, k + 1);
    if (k % 2 == 1) term = -term;
    acc += term;
  }
  return acc.is_zero();
}

// Identity 4: sum_{k=0}^n (-1)^k C(n+k,k) C(n+1,k+1) = 0.
bool identity_alternating_b(int n) {
  Rational acc(0L);
  for (int k = 0; k <= n; ++k) {
    Rational term = int_binomial(n + k, k) * int_binomial(n + 1, k + 1);
    if (k % 2 == 1) term = -term;
    acc += term;
  }
  return acc.is_zero();
}

}  // namespace

CheckReport check_combinatorial_identities(int n_max, int trials, std::uint64_t seed) {
  require(n_max >= 1, "n_max must be at least 1");
  require(trials >= 1, "trials must be at least 1");
  CheckReport report;

  bool ok1 = true, ok2 = true, ok3 = true, ok4 = true;
  int first_bad1 = 0, first_bad3 = 0, first_bad4 = 0;
  std::string bad2;

  lab::Xoshiro256ss rng(seed, /*stream=*/0);
  const auto random_rational = [&rng](bool force_noninteger) {
    const long whole = static_cast<long>(rng.next() % 101) - 50;
    const long den = 2 + static_cast<long>(rng.next() % 11);  // 2..12
    long num = static_cast<long>(rng.next() % static_cast<std::uint64_t>(den));
    if (force_noninteger && num == 0) num = 1;  // keeps y off the integers, so C(y,k) never vanishes
    return Rational(whole) + Rational(num, den);
  };

  for (int n = 1; n <= n_max; ++n) {
    if (ok1 && !identity_central_binomial(n)) {
      ok1 = false;
      first_bad1 = n;
    }
    if (ok3 && !identity_alternating_a(n)) {
      ok3 = false;
      first_bad3 = n;
    }
    if (ok4 && !identity_alternating_b(n)) {
      ok4 = false;
      first_bad4 = n;
    }
    for (int t = 0; t < trials && ok2; ++t) {
      const Rational y = random_rational(true);
      const Rational z = random_rational(false);
      if (!identity_binomial_ratio(n, y, z)) {
        ok2 = false;
        bad2 = "n=" + std::to_string(n) + ", y=" + y.str() + ", z=" + z.str();
      }
    }
  }

  const std::string range = "n=1.." + std::to_string(n_max);
  report.add("central-binomial-sum", ok1,
             ok1 ? range + ", exact" : "fails first at n=" + std::to_string(first_bad1));
  report.add("binomial-ratio-sum", ok2,
             ok2 ? range + ", " + std::to_string(trials) + " rational (y,z) samples per n, exact"
                 : "fails at " + bad2);
  report.add("alternating-binomial-sum-a", ok3,
             ok3 ? range + ", exact" : "fails first at n=" + std::to_string(first_bad3));
  report.add("alternating-binomial-sum-b", ok4,
             ok4 ? range + ", exact" : "fails first at n=" + std::to_string(first_bad4));
  return report;
}

CheckReport check_integral_closed_forms(int n_max) {
  require(n_max >= 1 && n_max <= 16, "n_max must lie in 1..16");
  CheckReport report;
  const int symbolic_max = std::min(n_max, 8);

  for (int n = 1; n <= symbolic_max; ++n) {
    bool ok = true;
    std::string witness;
    for (int m = 0; m <= n; ++m) {
      const Rational symbolic =
          m == 0 ? simplex_integral(det_poly(n)) : simplex_integral(det_poly_pinned(n, m));
      const Rational double_sum =
          m == 0 ? integral_value(n)
                 : [&] {
                     // Evaluate the double-sum polynomial at u_{n+1} = 1.
                     const SparsePoly poly = expected_pinned_partial_integral(n, m);
                     Rational at_one(0L);
                     for (const auto& [e, c] : poly.terms()) at_one += c;
                     return at_one;
                   }();
      const Rational single_sum = pinned_integral_value(n, m);
      if (!(symbolic == double_sum && symbolic == single_sum)) {
        ok = false;
        witness = "m=" + std::to_string(m) + ": symbolic " + symbolic.str() + ", double sum " +
                  double_sum.str() + ", single sum " + single_sum.str();
        break;
      }
    }
    report.add("pinned-det-integral n=" + std::to_string(n), ok,
               ok ? "m=0.." + std::to_string(n) + ": symbolic route and both closed forms agree exactly"
                  : witness);
  }

  for (int n = symbolic_max + 1; n <= n_max; ++n) {
    bool ok = true;
    std::string witness;
    for (int m = 0; m <= n; ++m) {
      Rational at_one(0L);
      if (m == 0) {
        at_one = integral_value(n);
      } else {
        const SparsePoly poly = expected_pinned_partial_integral(n, m);
        for (const auto& [e, c] : poly.terms()) at_one += c;
      }
      if (!(at_one == pinned_integral_value(n, m))) {
        ok = false;
        witness = "closed forms disagree at m=" + std::to_string(m);
        break;
      }
    }
    report.add("pinned-det-closed-forms n=" + std::to_string(n), ok,
               ok ? "m=0.." + std::to_string(n) + ": closed forms agree exactly" : witness);
  }

  return report;
}

}  // namespace ordertau::appendix
