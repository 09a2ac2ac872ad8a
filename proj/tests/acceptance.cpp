// Acceptance suite: every release-gating property in one binary, one
// pass/fail line per criterion, nonzero exit when anything fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "appendix.hpp"
#include "copula.hpp"
#include "mc.hpp"
#include "product_order.hpp"

using ordertau::exact::BigInt;
using ordertau::exact::Rational;
using ordertau::exact::simplex_integral;
using ordertau::product::SubsetK;

namespace {

Rational rat(long n, long d = 1) { return Rational(n, d); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

#define EXPECT(cond, label)                         \
  do {                                              \
    if (!(cond)) {                                  \
      out.pass = false;                             \
      out.detail << " [failed: " << (label) << "]"; \
    }                                               \
  } while (0)

std::vector<int> iota_subset(int k) {
  std::vector<int> v(static_cast<std::size_t>(k));
  std::iota(v.begin(), v.end(), 1);
  return v;
}

// 1. Symbolic route for the full order transform, d = 2..8.
Outcome criterion1() {
  Outcome out;
  for (int d = 2; d <= 8; ++d) {
    const Rational bracket =
        Rational(BigInt::factorial(static_cast<unsigned long>(d))) *
        simplex_integral(ordertau::product::order_statistic_cdf_poly(d));
    EXPECT(bracket == Rational(1L, d + 1L), "bracket at d=" + std::to_string(d));
    const Rational closed = ordertau::product::kappa_product_order(d);
    const Rational expected =
        (Rational(BigInt::pow2(static_cast<unsigned long>(d))) - rat(d + 1)) /
        ((Rational(BigInt::pow2(static_cast<unsigned long>(d - 1))) - rat(1)) * rat(d + 1));
    EXPECT(closed == expected, "kappa closed form at d=" + std::to_string(d));
    EXPECT(ordertau::product::kappa_from_bracket(bracket, d) == closed,
           "bracket route kappa at d=" + std::to_string(d));
  }
  out.detail << "d=2..8, d!*integral = 1/(d+1) and kappa formula, exact";
  return out;
}

// 2. The ten known lower-tail values over denominator 945, via both closed
// forms and the bracket-integration route.
Outcome criterion2() {
  Outcome out;
  const struct {
    int d, k;
    long num;
  } table[] = {{2, 2, 315}, {3, 2, 378}, {4, 2, 405}, {5, 2, 420}, {3, 3, 315},
               {4, 3, 369}, {5, 3, 395}, {5, 4, 345}, {4, 4, 297}, {5, 5, 273}};
  for (const auto& row : table) {
    const Rational expected(row.num, 945L);
    // kappa_lower_tail evaluates both summation forms and insists they agree.
    EXPECT(ordertau::product::kappa_lower_tail(row.d, row.k) == expected,
           "closed forms at d=" + std::to_string(row.d) + ",k=" + std::to_string(row.k));
    const Rational via_bracket = ordertau::product::kappa_from_bracket(
        ordertau::product::bracket_margin(SubsetK(row.d, iota_subset(row.k))), row.k);
    EXPECT(via_bracket == expected,
           "bracket route at d=" + std::to_string(row.d) + ",k=" + std::to_string(row.k));
  }
  out.detail << "10 entries of the d<=5 table, both summation forms and integration";
  return out;
}

// 3. The d = 5, K = {1,2,3,5} margin and its reflection.
Outcome criterion3() {
  Outcome out;
  const SubsetK k(5, {1, 2, 3, 5});
  const Rational bracket = ordertau::product::bracket_margin(k);
  EXPECT(bracket == rat(47, 252), "bracket");
  EXPECT(ordertau::product::kappa_from_bracket(bracket, 4) == rat(125, 441), "kappa");
  const SubsetK mirrored = ordertau::product::reflect_subset(k);
  EXPECT(mirrored.members == std::vector<int>({1, 3, 4, 5}), "reflected subset");
  EXPECT(ordertau::product::bracket_margin(mirrored) == rat(47, 252), "reflected bracket");
  out.detail << "K={1,2,3,5}: 47/252 and 125/441; identical at K={1,3,4,5}";
  return out;
}

// 4. Reflection sweep over every subset, d = 3..6.
Outcome criterion4() {
  Outcome out;
  int checked = 0;
  for (int d = 3; d <= 6; ++d) {
    for (unsigned mask = 0; mask < (1U << d); ++mask) {
      std::vector<int> members;
      for (int i = 1; i <= d; ++i)
        if (mask & (1U << (i - 1))) members.push_back(i);
      if (members.size() < 2) continue;
      const SubsetK k(d, members);
      EXPECT(ordertau::product::bracket_margin(k) ==
                 ordertau::product::bracket_margin(ordertau::product::reflect_subset(k)),
             "subset of d=" + std::to_string(d));
      ++checked;
    }
  }
  EXPECT(checked == 4 + 11 + 26 + 57, "subset count");
  out.detail << checked << " subsets, bracket equal to its reflection, exact";
  return out;
}

// 5. Pair margin closed form and its limit.
Outcome criterion5() {
  Outcome out;
  for (int d = 2; d <= 8; ++d)
    EXPECT(ordertau::product::kappa_lower_tail(d, 2) == Rational(d - 1L, 2L * d - 1),
           "pair margin at d=" + std::to_string(d));
  EXPECT(ordertau::product::kappa_lower_tail_limit(2) == rat(1, 2), "limit");
  out.detail << "(d-1)/(2d-1) for d=2..8 and limit 1/2, exact";
  return out;
}

// 6. Combinatorial identities to n = 30 and integral identities to n = 8.
Outcome criterion6() {
  Outcome out;
  const auto identities = ordertau::appendix::check_combinatorial_identities(30, 20, 2026);
  for (const auto& c : identities.checks) EXPECT(c.pass, c.name + " (" + c.detail + ")");
  for (int n = 1; n <= 8; ++n) {
    EXPECT(ordertau::appendix::det_poly_partial_integral(n) ==
               ordertau::appendix::expected_partial_integral(n),
           "partial-integral polynomial at n=" + std::to_string(n));
    for (int m = 1; m <= n; ++m)
      EXPECT(ordertau::appendix::det_poly_pinned_partial_integral(n, m) ==
                 ordertau::appendix::expected_pinned_partial_integral(n, m),
             "pinned partial integral at n=" + std::to_string(n) + ",m=" + std::to_string(m));
  }
  const auto integrals = ordertau::appendix::check_integral_closed_forms(8);
  for (const auto& c : integrals.checks) EXPECT(c.pass, c.name);
  out.detail << "4 identities to n=30 (20 samples each); integral identities to n=8, all m";
  return out;
}

// 7. Exact shuffle and mixture values.
Outcome criterion7() {
  Outcome out;
  using namespace ordertau::lab;
  const CopulaModel ma = shuffle_preset('A');
  const CopulaModel mb = shuffle_preset('B');
  const auto& a = std::get<ShuffleOfM>(ma.variant());
  const auto& b = std::get<ShuffleOfM>(mb.variant());
  EXPECT(shuffle_order_bracket(a) == rat(1, 2), "[A_T,A_T]");
  EXPECT(shuffle_order_bracket(b) == rat(3, 8), "[B_T,B_T]");
  for (int i = 0; i <= 32; ++i)
    for (int j = 0; j <= 32; ++j) {
      const std::vector<Rational> u{Rational(i, 32L), Rational(j, 32L)};
      if (!(eval_copula(ma, u) <= eval_copula(mb, u))) {
        EXPECT(false, "A <= B at grid point");
        i = j = 33;
      }
    }
  const CopulaModel d = parse_model("mix:0.5*M+0.5*W");
  const std::vector<Rational> p{rat(3, 8), rat(4, 8)};
  EXPECT(eval_copula(d, p) == rat(3, 16), "D(3/8,4/8)");
  EXPECT(eval_mw_order_transform(rat(1, 2), rat(3, 8), rat(4, 8)) == rat(2, 16), "D_T(3/8,4/8)");
  out.detail << "[A_T,A_T]=1/2, [B_T,B_T]=3/8, A<=B on 33x33, D=3/16 vs D_T=2/16";
  return out;
}

// 8. Monte Carlo consistency at n = 1e5 with three fixed seeds.
Outcome criterion8(std::vector<ordertau::lab::Estimate>& archive) {
  Outcome out;
  using namespace ordertau::lab;
  const std::uint64_t n = 100000;
  for (const std::uint64_t seed : {7ULL, 17ULL, 27ULL}) {
    for (const int d : {3, 5}) {
      const Estimate est = estimate_bracket(make_product(d), n, seed, true, std::nullopt, 1);
      archive.push_back(est);
      EXPECT(std::abs(est.value - 1.0 / (d + 1)) <= 4.0 * est.std_error,
             "product d=" + std::to_string(d) + " seed=" + std::to_string(seed));
    }
    const SubsetK k(5, {1, 2, 3, 5});
    const Estimate margin = estimate_bracket(make_product(5), n, seed, true, k, 1);
    archive.push_back(margin);
    EXPECT(std::abs(margin.value - 47.0 / 252.0) <= 4.0 * margin.std_error,
           "margin seed=" + std::to_string(seed));
  }
  out.detail << "n=1e5, seeds {7,17,27}: 1/(d+1) for d in {3,5} and 47/252, within 4 sigma";
  return out;
}

// 9. Order-theorem inequalities, statistically.
Outcome criterion9(std::vector<ordertau::CheckReport>& archive) {
  Outcome out;
  using namespace ordertau::lab;
  const std::uint64_t n = 100000;
  for (const char* spec : {"product:4", "shuffleM:B", "mix:0.5*M+0.5*W"}) {
    const auto report = verify_order_theorems(parse_model(spec), n, 11, 19, 4.0, 3.0, 1);
    archive.push_back(report);
    bool kappa_seen = false;
    for (const auto& c : report.checks) {
      if (c.name == "kappa-not-decreased") kappa_seen = true;
      EXPECT(c.pass, std::string(spec) + ": " + c.name);
    }
    EXPECT(kappa_seen, std::string(spec) + ": kappa check present");
  }
  const auto curves = verify_order_theorems(parse_model("product:2"), n, 11, 19, 4.0, 3.0, 1);
  archive.push_back(curves);
  bool curve_seen = false;
  for (const auto& c : curves.checks) {
    if (c.name == "kendall-curve-not-increased") curve_seen = true;
    EXPECT(c.pass, std::string("product:2: ") + c.name);
  }
  EXPECT(curve_seen, "product:2: curve check present");
  out.detail << "kappa inequality for {product:4, shuffleM:B, mix D}; 19-point curve for product:2";
  return out;
}

// 10. Bit-identical reproduction of criteria 8 and 9 across 1, 2, 8 threads.
Outcome criterion10(const std::vector<ordertau::lab::Estimate>& estimates,
                    const std::vector<ordertau::CheckReport>& reports) {
  Outcome out;
  using namespace ordertau::lab;
  for (const int threads : {2, 8}) {
    std::size_t i = 0;
    for (const std::uint64_t seed : {7ULL, 17ULL, 27ULL}) {
      for (const int d : {3, 5}) {
        const Estimate est =
            estimate_bracket(make_product(d), 100000, seed, true, std::nullopt, threads);
        EXPECT(est.value == estimates[i].value && est.std_error == estimates[i].std_error,
               "estimate " + std::to_string(i) + " at threads=" + std::to_string(threads));
        ++i;
      }
      const SubsetK k(5, {1, 2, 3, 5});
      const Estimate margin = estimate_bracket(make_product(5), 100000, seed, true, k, threads);
      EXPECT(margin.value == estimates[i].value && margin.std_error == estimates[i].std_error,
             "margin estimate at threads=" + std::to_string(threads));
      ++i;
    }
    const char* specs[] = {"product:4", "shuffleM:B", "mix:0.5*M+0.5*W", "product:2"};
    for (std::size_t s = 0; s < 4; ++s) {
      const auto report = verify_order_theorems(parse_model(specs[s]), 100000, 11, 19, 4.0, 3.0, threads);
      const auto& reference = reports[s];
      EXPECT(report.checks.size() == reference.checks.size(),
             std::string(specs[s]) + " report size at threads=" + std::to_string(threads));
      for (std::size_t c = 0; c < report.checks.size(); ++c)
        EXPECT(report.checks[c].detail == reference.checks[c].detail,
               std::string(specs[s]) + " detail " + std::to_string(c) + " at threads=" +
                   std::to_string(threads));
    }
  }

  // Kendall curves bit for bit across thread counts.
  std::vector<double> grid(19);
  for (int i = 1; i <= 19; ++i) grid[static_cast<std::size_t>(i - 1)] = i / 20.0;
  const KendallCurve base = estimate_kendall_curve(make_product(2), 100000, 11, true, grid, 1);
  for (const int threads : {2, 8}) {
    const KendallCurve again = estimate_kendall_curve(make_product(2), 100000, 11, true, grid, threads);
    EXPECT(again.values == base.values && again.std_errors == base.std_errors,
           "curve at threads=" + std::to_string(threads));
  }
  out.detail << "criteria 8 and 9 reproduce bit-identically at 1, 2 and 8 threads";
  return out;
}

}  // namespace

int main() {
  std::vector<ordertau::lab::Estimate> mc_estimates;
  std::vector<ordertau::CheckReport> mc_reports;

  struct Entry {
    std::string title;
    std::function<Outcome()> fn;
    double time_limit_s;  // 0: no stated budget
  };
  const std::vector<Entry> criteria = {
      {"full order transform, symbolic route (d=2..8)", criterion1, 30.0},
      {"lower-tail table over /945, two forms + integration", criterion2, 10.0},
      {"worked margin K={1,2,3,5} and its reflection", criterion3, 10.0},
      {"reflection sweep d=3..6, every |K|>=2", criterion4, 300.0},
      {"pair margin (d-1)/(2d-1) and limit 1/2", criterion5, 0.0},
      {"combinatorial and integral identity suites", criterion6, 120.0},
      {"exact shuffle and mixture values", criterion7, 0.0},
      {"Monte Carlo consistency at fixed seeds", [&] { return criterion8(mc_estimates); }, 60.0},
      {"order-theorem inequalities, statistical", [&] { return criterion9(mc_reports); }, 0.0},
      {"thread-count determinism of criteria 8-9",
       [&] { return criterion10(mc_estimates, mc_reports); }, 0.0},
  };

  int failures = 0;
  int id = 0;
  for (const auto& entry : criteria) {
    ++id;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = entry.fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (entry.time_limit_s > 0 && secs > entry.time_limit_s) {
      out.pass = false;
      out.detail << " [over time budget of " << entry.time_limit_s << "s]";
    }
    std::printf("[%s] criterion %2d: %s :: %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", id,
                entry.title.c_str(), out.detail.str().c_str(), secs);
    if (!out.pass) ++failures;
  }
  if (failures > 0) std::printf("%d of %d criteria FAILED\n", failures, id);
  else std::printf("all %d criteria passed\n", id);
  return failures == 0 ? 0 : 1;
}
