// SPDX-License-Identifier: Apache-2.0
//
// extern "C" surface of the shared library. Exceptions from the C++ core are
// mapped to status codes here; the message is kept in thread-local storage.
#include "ordertau.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "appendix.hpp"
#include "copula.hpp"
#include "errors.hpp"
#include "mc.hpp"
#include "product_order.hpp"
#include "rational.hpp"
#include "report.hpp"

using ordertau::CheckReport;
using ordertau::exact::Rational;
using ordertau::product::SubsetK;

struct ot_model {
  ordertau::lab::CopulaModel model;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ot_status fail(ot_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <class Fn>
ot_status guarded(Fn&& fn) {
  try {
    fn();
    return OT_OK;
  } catch (const ordertau::parse_error& e) {
    return fail(OT_ERR_PARSE, e.what());
  } catch (const ordertau::unsupported_error& e) {
    return fail(OT_ERR_UNSUPPORTED, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(OT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::logic_error& e) {
    return fail(OT_ERR_INTERNAL, e.what());
  } catch (const std::exception& e) {
    return fail(OT_ERR_INTERNAL, e.what());
  }
}

SubsetK subset_from(int d, const int* members, int count) {
  if (members == nullptr || count < 0) throw std::invalid_argument("null subset");
  return SubsetK(d, std::vector<int>(members, members + count));
}

Rational parse_rational_arg(const char* text, const char* what) {
  if (text == nullptr) throw ordertau::parse_error(std::string(what) + ": null string");
  try {
    return Rational::parse(text);
  } catch (const std::invalid_argument& e) {
    throw ordertau::parse_error(std::string(what) + ": " + e.what());
  }
}

void fill_report(const CheckReport& report, ot_report* out) {
  out->count = static_cast<int>(report.checks.size());
  out->failed = report.failed_count();
  out->checks = static_cast<ot_check*>(std::calloc(report.checks.size(), sizeof(ot_check)));
  if (out->checks == nullptr && !report.checks.empty()) throw std::bad_alloc();
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    out->checks[i].name = dup_string(report.checks[i].name);
    out->checks[i].pass = report.checks[i].pass ? 1 : 0;
    out->checks[i].detail = dup_string(report.checks[i].detail);
  }
}

}  // namespace

extern "C" {

const char* ot_last_error(void) { return g_last_error.c_str(); }

void ot_string_free(char* s) { std::free(s); }

const char* ot_version(void) { return "0.1.0"; }

ot_status ot_kappa_product_order(int d, char** kappa_out) {
  return guarded([&] {
    if (kappa_out == nullptr) throw std::invalid_argument("null output pointer");
    *kappa_out = dup_string(ordertau::product::kappa_product_order(d).str());
  });
}

ot_status ot_bracket_margin(int d, const int* members, int count, char** bracket_out,
                            char** kappa_out) {
  return guarded([&] {
    const SubsetK k = subset_from(d, members, count);
    const Rational bracket = ordertau::product::bracket_margin(k);
    if (bracket_out != nullptr) *bracket_out = dup_string(bracket.str());
    if (kappa_out != nullptr)
      *kappa_out = dup_string(
          ordertau::product::kappa_from_bracket(bracket, static_cast<int>(k.members.size())).str());
  });
}

ot_status ot_bracket_lower_tail(int d, int k, char** bracket_out) {
  return guarded([&] {
    if (bracket_out == nullptr) throw std::invalid_argument("null output pointer");
    *bracket_out = dup_string(ordertau::product::bracket_lower_tail(d, k).str());
  });
}

ot_status ot_kappa_lower_tail(int d, int k, char** kappa_out) {
  return guarded([&] {
    if (kappa_out == nullptr) throw std::invalid_argument("null output pointer");
    *kappa_out = dup_string(ordertau::product::kappa_lower_tail(d, k).str());
  });
}

ot_status ot_kappa_lower_tail_limit(int k, char** kappa_out) {
  return guarded([&] {
    if (kappa_out == nullptr) throw std::invalid_argument("null output pointer");
    *kappa_out = dup_string(ordertau::product::kappa_lower_tail_limit(k).str());
  });
}

ot_status ot_kappa_from_bracket(const char* bracket, int m, char** kappa_out) {
  return guarded([&] {
    if (kappa_out == nullptr) throw std::invalid_argument("null output pointer");
    const Rational b = parse_rational_arg(bracket, "bracket");
    *kappa_out = dup_string(ordertau::product::kappa_from_bracket(b, m).str());
  });
}

ot_status ot_reflect_subset(int d, const int* members, int count, int* reflected_out) {
  return guarded([&] {
    if (reflected_out == nullptr) throw std::invalid_argument("null output pointer");
    const SubsetK mirrored = ordertau::product::reflect_subset(subset_from(d, members, count));
    for (int i = 0; i < count; ++i) reflected_out[i] = mirrored.members[static_cast<std::size_t>(i)];
  });
}

ot_status ot_model_parse(const char* spec, ot_model** model_out) {
  return guarded([&] {
    if (spec == nullptr || model_out == nullptr) throw std::invalid_argument("null argument");
    *model_out = new ot_model{ordertau::lab::parse_model(spec)};
  });
}

void ot_model_free(ot_model* model) { delete model; }

int ot_model_dimension(const ot_model* model) {
  return model == nullptr ? 0 : model->model.dimension();
}

ot_status ot_model_describe(const ot_model* model, char** out) {
  return guarded([&] {
    if (model == nullptr || out == nullptr) throw std::invalid_argument("null argument");
    *out = dup_string(model->model.describe());
  });
}

ot_status ot_eval_copula(const ot_model* model, const char* const* coords, int count,
                         char** value_out) {
  return guarded([&] {
    if (model == nullptr || coords == nullptr || value_out == nullptr)
      throw std::invalid_argument("null argument");
    std::vector<Rational> u;
    u.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) u.push_back(parse_rational_arg(coords[i], "coordinate"));
    *value_out = dup_string(ordertau::lab::eval_copula(model->model, u).str());
  });
}

ot_status ot_shuffle_bracket(const ot_model* model, int order_transform, char** bracket_out) {
  return guarded([&] {
    if (model == nullptr || bracket_out == nullptr) throw std::invalid_argument("null argument");
    const auto* shuffle = std::get_if<ordertau::lab::ShuffleOfM>(&model->model.variant());
    if (shuffle == nullptr)
      throw ordertau::unsupported_error("exact bracket integration needs a shuffleM model");
    const Rational b = order_transform != 0 ? ordertau::lab::shuffle_order_bracket(*shuffle)
                                            : ordertau::lab::shuffle_bracket(*shuffle);
    *bracket_out = dup_string(b.str());
  });
}

ot_status ot_eval_mw_order_transform(const ot_model* model, const char* u1, const char* u2,
                                     char** value_out) {
  return guarded([&] {
    if (model == nullptr || value_out == nullptr) throw std::invalid_argument("null argument");
    const auto wm = ordertau::lab::mw_mixture_weight(model->model);
    if (!wm)
      throw ordertau::unsupported_error(
          "order-transform evaluation needs a bivariate mixture of M and W");
    const Rational a = parse_rational_arg(u1, "u1");
    const Rational b = parse_rational_arg(u2, "u2");
    *value_out = dup_string(ordertau::lab::eval_mw_order_transform(*wm, a, b).str());
  });
}

ot_status ot_estimate_bracket(const ot_model* model, uint64_t n, uint64_t seed,
                              int order_transform, const int* margin_members, int margin_count,
                              int threads, ot_estimate* estimate_out) {
  return guarded([&] {
    if (model == nullptr || estimate_out == nullptr) throw std::invalid_argument("null argument");
    std::optional<SubsetK> margin;
    if (margin_members != nullptr && margin_count > 0)
      margin = subset_from(model->model.dimension(), margin_members, margin_count);
    const auto est = ordertau::lab::estimate_bracket(model->model, n, seed, order_transform != 0,
                                                     margin, threads);
    estimate_out->value = est.value;
    estimate_out->std_error = est.std_error;
    estimate_out->n = est.n;
    estimate_out->seed = est.seed;
  });
}

ot_status ot_estimate_kendall_curve(const ot_model* model, uint64_t n, uint64_t seed,
                                    int order_transform, const double* grid, int grid_count,
                                    int threads, double* values_out, double* std_errors_out) {
  return guarded([&] {
    if (model == nullptr || grid == nullptr || values_out == nullptr || std_errors_out == nullptr)
      throw std::invalid_argument("null argument");
    if (grid_count <= 0) throw std::invalid_argument("empty evaluation grid");
    const auto curve = ordertau::lab::estimate_kendall_curve(
        model->model, n, seed, order_transform != 0,
        std::vector<double>(grid, grid + grid_count), threads);
    for (int i = 0; i < grid_count; ++i) {
      values_out[i] = curve.values[static_cast<std::size_t>(i)];
      std_errors_out[i] = curve.std_errors[static_cast<std::size_t>(i)];
    }
  });
}

void ot_report_free(ot_report* report) {
  if (report == nullptr || report->checks == nullptr) return;
  for (int i = 0; i < report->count; ++i) {
    std::free(report->checks[i].name);
    std::free(report->checks[i].detail);
  }
  std::free(report->checks);
  report->checks = nullptr;
  report->count = 0;
  report->failed = 0;
}

ot_status ot_verify_identities(int n_max, int trials, uint64_t seed, ot_report* report_out) {
  return guarded([&] {
    if (report_out == nullptr) throw std::invalid_argument("null output pointer");
    fill_report(ordertau::appendix::check_combinatorial_identities(n_max, trials, seed), report_out);
  });
}

ot_status ot_verify_integrals(int n_max, ot_report* report_out) {
  return guarded([&] {
    if (report_out == nullptr) throw std::invalid_argument("null output pointer");
    fill_report(ordertau::appendix::check_integral_closed_forms(n_max), report_out);
  });
}

ot_status ot_verify_reflection(int d_max, ot_report* report_out) {
  return guarded([&] {
    if (report_out == nullptr) throw std::invalid_argument("null output pointer");
    fill_report(ordertau::product::check_reflection(d_max), report_out);
  });
}

ot_status ot_verify_monotonicity(int d_max, int k_max, ot_report* report_out) {
  return guarded([&] {
    if (report_out == nullptr) throw std::invalid_argument("null output pointer");
    fill_report(ordertau::product::check_monotonicity(d_max, k_max), report_out);
  });
}

ot_status ot_verify_order_theorems(const ot_model* model, uint64_t n, uint64_t seed,
                                   int grid_points, double value_sigmas, double ineq_sigmas,
                                   int threads, ot_report* report_out) {
  return guarded([&] {
    if (model == nullptr || report_out == nullptr) throw std::invalid_argument("null argument");
    fill_report(ordertau::lab::verify_order_theorems(model->model, n, seed, grid_points,
                                                     value_sigmas, ineq_sigmas, threads),
                report_out);
  });
}

}  // extern "C"
