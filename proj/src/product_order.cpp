// SPDX-License-Identifier: Apache-2.0
#include "product_order.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace ordertau::product {

using exact::BigInt;
using exact::Rational;
using exact::SparsePoly;

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

std::string subset_str(const SubsetK& k) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < k.members.size(); ++i) {
    if (i) os << ',';
    os << k.members[i];
  }
  os << '}';
  return os.str();
}

}  // namespace

SubsetK::SubsetK(int d_, std::vector<int> members_) : d(d_), members(std::move(members_)) {
  require(d >= 2, "ambient dimension must be at least 2");
  require(members.size() >= 2, "coordinate subset needs at least two members");
  require(static_cast<int>(members.size()) <= d, "coordinate subset larger than the ambient dimension");
  for (std::size_t i = 0; i < members.size(); ++i) {
    require(members[i] >= 1 && members[i] <= d, "subset member out of range 1.." + std::to_string(d));
    if (i) require(members[i] > members[i - 1], "subset members must be strictly increasing");
  }
}

const SparsePoly& order_statistic_cdf_poly(int d) {
  require(d >= 1, "dimension must be at least 1");
  require(d <= kMaxSymbolicDimension,
          "symbolic route supports dimension <= " + std::to_string(kMaxSymbolicDimension));
  static std::mutex mu;
  static std::map<int, SparsePoly> memo;
  std::lock_guard lock(mu);
  if (const auto it = memo.find(d); it != memo.end()) return it->second;

  // Matrix entries a_{i,j} = u_i^(j-i+1)/(j-i+1)! on and above the diagonal,
  // 1 on the subdiagonal, 0 below it.
  std::vector<std::vector<SparsePoly>> a(static_cast<std::size_t>(d),
                                         std::vector<SparsePoly>(static_cast<std::size_t>(d), SparsePoly(d)));
  for (int i = 1; i <= d; ++i) {
    for (int j = 1; j <= d; ++j) {
      if (i > j + 1) continue;
      const unsigned p = static_cast<unsigned>(j - i + 1);
      exact::ExponentVec e(static_cast<std::size_t>(d), 0U);
      e[static_cast<std::size_t>(i - 1)] = p;
      a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
          SparsePoly::monomial(d, std::move(e), Rational(BigInt(1L), BigInt::factorial(p)));
    }
  }
  SparsePoly h = hessenberg_determinant(a).scaled(Rational(BigInt::factorial(static_cast<unsigned long>(d))));
  return memo.emplace(d, std::move(h)).first->second;
}

std::vector<int> envelope_substitution(const SubsetK& k) {
  std::vector<int> target(static_cast<std::size_t>(k.d), 0);
  for (int j = 1; j <= k.d; ++j) {
    const auto it = std::lower_bound(k.members.begin(), k.members.end(), j);
    // Smallest member >= j: j itself when j is a member, the next member
    // above otherwise, and the constant 1 when none exists.
    target[static_cast<std::size_t>(j - 1)] = it == k.members.end() ? 0 : *it;
  }
  return target;
}

exact::Rational bracket_margin(const SubsetK& k) {
  const SparsePoly& h = order_statistic_cdf_poly(k.d);
  const SparsePoly integrand = h.substitute(envelope_substitution(k));
  return Rational(BigInt::factorial(static_cast<unsigned long>(k.d))) * simplex_integral(integrand);
}

exact::Rational kappa_from_bracket(const Rational& bracket, int m) {
  require(m >= 2, "effective dimension must be at least 2");
  require(bracket.sign() >= 0 && bracket <= Rational(1L, 2L), "bracket must lie in [0, 1/2]");
  const Rational two_m(BigInt::pow2(static_cast<unsigned long>(m)));
  const Rational denom = Rational(BigInt::pow2(static_cast<unsigned long>(m - 1))) - Rational(1L);
  return (two_m * bracket - Rational(1L)) / denom;
}

exact::Rational kappa_product_order(int d) {
  require(d >= 2, "dimension must be at least 2");
  require(d <= kMaxClosedFormDimension,
          "closed forms supported for dimension <= " + std::to_string(kMaxClosedFormDimension));
  const Rational num = Rational(BigInt::pow2(static_cast<unsigned long>(d))) - Rational(d + 1L);
  const Rational den = (Rational(BigInt::pow2(static_cast<unsigned long>(d - 1))) - Rational(1L)) * Rational(d + 1L);
  return num / den;
}

namespace {

// 1/2 - (1/4) sum_{h=2}^k C(2h,h) C(2d+2-2h,d+1-h) / ((2h-1) C(2d,d)),
// the form suited to small k.
Rational bracket_lower_tail_form1(int d, int k) {
  const Rational central(BigInt::binomial(2UL * static_cast<unsigned long>(d), static_cast<unsigned long>(d)));
  Rational sum(0L);
  for (int h = 2; h <= k; ++h) {
    Rational term(BigInt::binomial(2UL * static_cast<unsigned long>(h), static_cast<unsigned long>(h)));
    term *= Rational(BigInt::binomial(static_cast<unsigned long>(2 * d + 2 - 2 * h), static_cast<unsigned long>(d + 1 - h)));
    term /= Rational(2L * h - 1L);
    sum += term;
  }
  return Rational(1L, 2L) - Rational(1L, 4L) * sum / central;
}

// 1/(d+1) + (1/(2d)) sum_{l=1}^{d-k} C(d,l-1) C(d,l) / C(2d-1,2l-1),
// the form suited to large k.
Rational bracket_lower_tail_form2(int d, int k) {
  Rational sum(0L);
  for (int l = 1; l <= d - k; ++l) {
    Rational term(BigInt::binomial(static_cast<unsigned long>(d), static_cast<unsigned long>(l - 1)));
    term *= Rational(BigInt::binomial(static_cast<unsigned long>(d), static_cast<unsigned long>(l)));
    term /= Rational(BigInt::binomial(static_cast<unsigned long>(2 * d - 1), static_cast<unsigned long>(2 * l - 1)));
    sum += term;
  }
  return Rational(1L, d + 1L) + Rational(1L, 2L * d) * sum;
}

void validate_lower_tail_args(int d, int k) {
  require(d >= 2 && d <= kMaxClosedFormDimension,
          "dimension must lie in 2.." + std::to_string(kMaxClosedFormDimension));
  require(k >= 2 && k <= d, "tail size must lie in 2..d");
}

}  // namespace

exact::Rational bracket_lower_tail(int d, int k) {
  validate_lower_tail_args(d, k);
  const Rational b1 = bracket_lower_tail_form1(d, k);
  const Rational b2 = bracket_lower_tail_form2(d, k);
  if (!(b1 == b2))
    throw std::logic_error("internal error: lower-tail bracket forms disagree at d=" + std::to_string(d) +
                           ", k=" + std::to_string(k) + " (" + b1.str() + " vs " + b2.str() + ")");
  return b1;
}

exact::Rational kappa_lower_tail(int d, int k) {
  // At k = d the bracket is 1/(d+1); tau of the full margin is
  // kappa_product_order(d), which coincides with 1/(d+1) only at d = 2.
  return kappa_from_bracket(bracket_lower_tail(d, k), k);
}

exact::Rational kappa_lower_tail_limit(int k) {
  require(k >= 2, "tail size must be at least 2");
  require(k <= 64, "tail size out of supported range");
  Rational sum(0L);
  for (int h = 2; h <= k; ++h) {
    Rational term(BigInt::binomial(2UL * static_cast<unsigned long>(h), static_cast<unsigned long>(h)));
    term /= Rational(2L * h - 1L);
    term /= Rational(BigInt::pow2(static_cast<unsigned long>(2 * h - 2)));
    sum += term;
  }
  const Rational prefactor = Rational(BigInt::pow2(static_cast<unsigned long>(k - 2))) /
                             (Rational(BigInt::pow2(static_cast<unsigned long>(k - 1))) - Rational(1L));
  return Rational(1L) - prefactor * sum;
}

SubsetK reflect_subset(const SubsetK& k) {
  std::vector<int> mirrored;
  mirrored.reserve(k.members.size());
  for (int i : k.members) mirrored.push_back(k.d - i + 1);
  std::sort(mirrored.begin(), mirrored.end());
  return SubsetK(k.d, std::move(mirrored));
}

CheckReport check_reflection(int d_max) {
  require(d_max >= 2 && d_max <= kMaxSymbolicDimension,
          "reflection sweep supports d up to " + std::to_string(kMaxSymbolicDimension));
  CheckReport report;
  for (int d = 2; d <= d_max; ++d) {
    int subsets = 0;
    bool ok = true;
    std::string witness;
    for (unsigned mask = 0; mask < (1U << d); ++mask) {
      std::vector<int> members;
      for (int i = 1; i <= d; ++i)
        if (mask & (1U << (i - 1))) members.push_back(i);
      if (members.size() < 2) continue;
      ++subsets;
      const SubsetK k(d, members);
      const SubsetK mirrored = reflect_subset(k);
      if (!(bracket_margin(k) == bracket_margin(mirrored))) {
        ok = false;
        witness = subset_str(k);
      }
    }
    report.add("reflection d=" + std::to_string(d), ok,
               ok ? std::to_string(subsets) + " subsets, brackets equal under reflection"
                  : "bracket changed under reflection of K=" + witness);
  }
  return report;
}

CheckReport check_monotonicity(int d_max, int k_max) {
  require(d_max >= 2 && d_max <= kMaxClosedFormDimension, "d_max out of range");
  require(k_max >= 2 && k_max <= d_max, "k_max out of range");
  CheckReport report;

  for (int d = 2; d <= d_max; ++d) {
    bool ok = true;
    for (int k = 3; k <= d; ++k)
      if (!(kappa_lower_tail(d, k) < kappa_lower_tail(d, k - 1))) ok = false;
    report.add("kappa-decreasing-in-k d=" + std::to_string(d), ok,
               "tau of the {1..k} margin strictly decreases over k=2.." + std::to_string(d));
  }

  const int d_ceiling = std::max(d_max, 10);
  for (int k = 2; k <= k_max; ++k) {
    bool increasing = true;
    bool below_limit = true;
    const Rational limit = kappa_lower_tail_limit(k);
    Rational prev = kappa_lower_tail(k, k);
    if (!(prev < limit)) below_limit = false;
    for (int d = k + 1; d <= d_ceiling; ++d) {
      const Rational cur = kappa_lower_tail(d, k);
      if (!(prev < cur)) increasing = false;
      if (!(cur < limit)) below_limit = false;
      prev = cur;
    }
    report.add("kappa-increasing-in-d k=" + std::to_string(k), increasing,
               "d=" + std::to_string(k) + ".." + std::to_string(d_ceiling));
    report.add("kappa-below-limit k=" + std::to_string(k), below_limit,
               "every finite-d value sits below the limit " + limit.str());
  }

  {
    bool ok = true;
    for (int d = 2; d <= d_max; ++d) {
      for (int k = 2; k <= d; ++k) {
        const Rational kappa = kappa_lower_tail(d, k);
        const Rational lo = -(Rational(BigInt::pow2(static_cast<unsigned long>(k - 1))) - Rational(1L)).reciprocal();
        if (kappa < lo || Rational(1L) < kappa) ok = false;
      }
    }
    report.add("kappa-bounds", ok, "all values within [-1/(2^(m-1)-1), 1]");
  }

  {
    bool positive = true;
    bool nonincreasing = true;
    Rational prev = kappa_product_order(2);
    if (!(Rational(0L) < prev)) positive = false;
    for (int d = 3; d <= 10; ++d) {
      const Rational cur = kappa_product_order(d);
      if (!(Rational(0L) < cur)) positive = false;
      if (prev < cur) nonincreasing = false;
      prev = cur;
    }
    report.add("order-transform-gain", positive && nonincreasing,
               "tau of the full order transform is positive and falls toward 0 over d=2..10");
  }

  return report;
}

}  // namespace ordertau::product
