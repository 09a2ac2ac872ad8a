// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the library exclusively through the C API
// in ordertau.h; all exact values stay rational strings end to end.
#include "ordertau.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsageOrInternal = 2;

[[noreturn]] void die(const std::string& msg) {
  std::cerr << "ordertau: " << msg << '\n';
  std::exit(kExitUsageOrInternal);
}

void check_status(ot_status st) {
  if (st != OT_OK) die(ot_last_error());
}

std::string take_string(char* s) {
  std::string out(s);
  ot_string_free(s);
  return out;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("ORDERTAU_SEED");
  if (env == nullptr) return 0;
  const std::string_view text(env);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    die("ORDERTAU_SEED is not an unsigned integer");
  return value;
}

std::string format_double(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// "p" or "p/q" rescaled to denominator 945 when exact, else empty.
std::string rescale_945(const std::string& rational) {
  long long q = 1;
  const auto slash = rational.find('/');
  const long long p = std::strtoll(rational.substr(0, slash).c_str(), nullptr, 10);
  if (slash != std::string::npos) q = std::strtoll(rational.c_str() + slash + 1, nullptr, 10);
  if (q == 0 || (945 * p) % q != 0) return {};
  return std::to_string(945 * p / q) + "/945";
}

void emit_kv_record(const json& rec, const std::string& format) {
  if (format == "json") {
    std::cout << rec.dump() << '\n';
    return;
  }
  std::cout << "key,value\n";
  for (const auto& [key, value] : rec.items()) {
    std::string text;
    if (value.is_string())
      text = value.get<std::string>();
    else if (value.is_array()) {
      for (const auto& v : value) {
        if (!text.empty()) text += ' ';
        text += v.dump();
      }
    } else
      text = value.dump();
    std::cout << key << ',' << csv_escape(text) << '\n';
  }
}

class Model {
public:
  explicit Model(const std::string& spec) { check_status(ot_model_parse(spec.c_str(), &m_)); }
  ~Model() { ot_model_free(m_); }
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;
  const ot_model* get() const { return m_; }
  std::string describe() const {
    char* s = nullptr;
    check_status(ot_model_describe(m_, &s));
    return take_string(s);
  }

private:
  ot_model* m_ = nullptr;
};

int run_exact(const std::string& which, int d, int k, const std::vector<int>& subset,
              const std::string& format) {
  json rec{{"kind", "exact"}, {"which", which}};
  if (which == "kappa-order") {
    if (d == 0) die("--which kappa-order needs --d");
    char* kappa = nullptr;
    check_status(ot_kappa_product_order(d, &kappa));
    rec["d"] = d;
    rec["kappa"] = take_string(kappa);
  } else if (which == "margin") {
    if (d == 0 || subset.empty()) die("--which margin needs --d and --K");
    char* bracket = nullptr;
    char* kappa = nullptr;
    check_status(ot_bracket_margin(d, subset.data(), static_cast<int>(subset.size()), &bracket, &kappa));
    std::vector<int> reflected(subset.size());
    check_status(ot_reflect_subset(d, subset.data(), static_cast<int>(subset.size()), reflected.data()));
    char* rbracket = nullptr;
    check_status(ot_bracket_margin(d, reflected.data(), static_cast<int>(reflected.size()), &rbracket, nullptr));
    rec["d"] = d;
    rec["K"] = subset;
    rec["bracket"] = take_string(bracket);
    rec["kappa"] = take_string(kappa);
    rec["reflected_K"] = reflected;
    rec["reflected_bracket"] = take_string(rbracket);
    if (rec["bracket"] != rec["reflected_bracket"])
      die("internal error: bracket not invariant under reflection");
    rec["reflection_equal"] = true;
  } else if (which == "lower-tail") {
    if (d == 0 || k == 0) die("--which lower-tail needs --d and --k");
    char* bracket = nullptr;
    char* kappa = nullptr;
    check_status(ot_bracket_lower_tail(d, k, &bracket));
    check_status(ot_kappa_lower_tail(d, k, &kappa));
    rec["d"] = d;
    rec["k"] = k;
    rec["bracket"] = take_string(bracket);
    rec["kappa"] = take_string(kappa);
  } else {  // limit
    if (k == 0) die("--which limit needs --k");
    char* kappa = nullptr;
    check_status(ot_kappa_lower_tail_limit(k, &kappa));
    rec["k"] = k;
    rec["kappa_limit"] = take_string(kappa);
  }
  emit_kv_record(rec, format);
  return kExitOk;
}

int run_table(int d_max, const std::string& format) {
  if (d_max < 2 || d_max > 12) die("--d-max must lie in 2..12");
  json rows = json::array();
  for (int d = 2; d <= d_max; ++d) {
    for (int k = 2; k <= d; ++k) {
      char* kappa = nullptr;
      check_status(ot_kappa_lower_tail(d, k, &kappa));
      const std::string value = take_string(kappa);
      json row{{"d", d}, {"k", k}, {"kappa", value}};
      const std::string scaled = rescale_945(value);
      row["kappa_945"] = scaled.empty() ? json() : json(scaled);
      rows.push_back(std::move(row));
    }
  }
  if (format == "json") {
    std::cout << json{{"kind", "table"}, {"d_max", d_max}, {"rows", rows}}.dump() << '\n';
  } else {
    std::cout << "d,k,kappa,kappa_945\n";
    for (const auto& row : rows) {
      std::cout << row["d"].get<int>() << ',' << row["k"].get<int>() << ','
                << row["kappa"].get<std::string>() << ','
                << (row["kappa_945"].is_null() ? "" : row["kappa_945"].get<std::string>()) << '\n';
    }
  }
  return kExitOk;
}

int run_mc(const std::string& model_spec, std::uint64_t n, std::uint64_t seed,
           const std::string& transform, const std::vector<int>& subset, int threads,
           const std::string& format) {
  const Model model(model_spec);
  ot_estimate est{};
  check_status(ot_estimate_bracket(model.get(), n, seed, transform == "order" ? 1 : 0,
                                   subset.empty() ? nullptr : subset.data(),
                                   static_cast<int>(subset.size()), threads, &est));
  json rec{{"kind", "estimate"}, {"model", model.describe()}, {"transform", transform},
           {"n", est.n},         {"seed", est.seed},          {"threads", threads},
           {"value", est.value}, {"std_error", est.std_error}};
  rec["K"] = subset.empty() ? json() : json(subset);
  if (format == "json") {
    std::cout << rec.dump() << '\n';
  } else {
    std::cout << "model,transform,K,n,seed,threads,value,std_error\n";
    std::string k_text;
    for (int v : subset) {
      if (!k_text.empty()) k_text += ' ';
      k_text += std::to_string(v);
    }
    std::cout << csv_escape(rec["model"].get<std::string>()) << ',' << transform << ','
              << csv_escape(k_text) << ',' << est.n << ',' << est.seed << ',' << threads << ','
              << format_double(est.value) << ',' << format_double(est.std_error) << '\n';
  }
  return kExitOk;
}

int emit_report(const std::string& suite, ot_report& report, const std::string& format) {
  json checks = json::array();
  for (int i = 0; i < report.count; ++i)
    checks.push_back(json{{"name", report.checks[i].name},
                          {"pass", report.checks[i].pass != 0},
                          {"detail", report.checks[i].detail}});
  const int failed = report.failed;
  ot_report_free(&report);
  if (format == "json") {
    std::cout << json{{"kind", "verify"},
                      {"suite", suite},
                      {"passed", static_cast<int>(checks.size()) - failed},
                      {"failed", failed},
                      {"checks", checks}}
                     .dump()
              << '\n';
  } else {
    std::cout << "name,pass,detail\n";
    for (const auto& c : checks)
      std::cout << csv_escape(c["name"].get<std::string>()) << ','
                << (c["pass"].get<bool>() ? "true" : "false") << ','
                << csv_escape(c["detail"].get<std::string>()) << '\n';
  }
  return failed > 0 ? kExitCheckFailure : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and Monte Carlo Kendall's tau for order-statistic copulas"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --format appear after the subcommand name

  std::string format = "json";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  auto* exact = app.add_subcommand("exact", "Exact rational computations");
  std::string which;
  int d = 0, k = 0;
  std::vector<int> subset;
  exact->add_option("--which", which, "Quantity to compute")
      ->required()
      ->check(CLI::IsMember({"kappa-order", "margin", "lower-tail", "limit"}));
  exact->add_option("--d", d, "Ambient dimension");
  exact->add_option("--k", k, "Tail size");
  exact->add_option("--K", subset, "Coordinate subset, e.g. 1,2,3,5")->delimiter(',');

  auto* table = app.add_subcommand("table", "Lower-tail Kendall's tau table");
  int d_max = 5;
  table->add_option("--d-max", d_max, "Largest dimension (2..12)");

  auto* mc = app.add_subcommand("mc", "Monte Carlo bracket estimation");
  std::string model_spec;
  std::string transform = "none";
  std::uint64_t n = 100000;
  std::optional<std::uint64_t> seed_opt;
  int threads = 1;
  std::vector<int> mc_subset;
  mc->add_option("--model", model_spec, "Model spec, e.g. product:3, shuffleM:A, mix:0.5*M+0.5*W")
      ->required();
  mc->add_option("--n", n, "Sample pairs");
  mc->add_option("--seed", seed_opt, "RNG seed (default: ORDERTAU_SEED or 0)");
  mc->add_option("--transform", transform, "Apply the order transform")
      ->check(CLI::IsMember({"none", "order"}));
  mc->add_option("--K", mc_subset, "Restrict comparison to these coordinates")->delimiter(',');
  mc->add_option("--threads", threads, "Worker threads (never changes results)");

  auto* verify = app.add_subcommand("verify", "Verification suites (exit 1 on any failing check)");
  std::string suite;
  std::string v_model_spec;
  int n_max = 0, trials = 20, v_d_max = 0, k_max = 5, grid_points = 19, v_threads = 1;
  std::uint64_t v_n = 100000;
  std::optional<std::uint64_t> v_seed_opt;
  double value_sigmas = 4.0, ineq_sigmas = 3.0;
  verify->add_option("--suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"identities", "integrals", "reflection", "monotonicity", "order-theorems"}));
  verify->add_option("--n-max", n_max, "Largest index (identities: default 30, integrals: default 8)");
  verify->add_option("--trials", trials, "Random (y,z) samples per n for identities");
  verify->add_option("--d-max", v_d_max, "Largest dimension (reflection: default 6, monotonicity: default 7)");
  verify->add_option("--k-max", k_max, "Largest tail size for monotonicity");
  verify->add_option("--model", v_model_spec, "Model spec for order-theorems");
  verify->add_option("--n", v_n, "Sample pairs for order-theorems");
  verify->add_option("--seed", v_seed_opt, "RNG seed (default: ORDERTAU_SEED or 0)");
  verify->add_option("--grid-points", grid_points, "Kendall curve grid size");
  verify->add_option("--value-sigmas", value_sigmas, "Std errors allowed for value checks");
  verify->add_option("--ineq-sigmas", ineq_sigmas, "Std errors allowed for one-sided checks");
  verify->add_option("--threads", v_threads, "Worker threads (never changes results)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsageOrInternal;
  }

  if (exact->parsed()) return run_exact(which, d, k, subset, format);
  if (table->parsed()) return run_table(d_max, format);
  if (mc->parsed())
    return run_mc(model_spec, n, seed_opt.value_or(default_seed()), transform, mc_subset, threads,
                  format);

  const std::uint64_t seed = v_seed_opt.value_or(default_seed());
  ot_report report{};
  if (suite == "identities") {
    check_status(ot_verify_identities(n_max == 0 ? 30 : n_max, trials, seed, &report));
  } else if (suite == "integrals") {
    check_status(ot_verify_integrals(n_max == 0 ? 8 : n_max, &report));
  } else if (suite == "reflection") {
    check_status(ot_verify_reflection(v_d_max == 0 ? 6 : v_d_max, &report));
  } else if (suite == "monotonicity") {
    check_status(ot_verify_monotonicity(v_d_max == 0 ? 7 : v_d_max, k_max, &report));
  } else {
    if (v_model_spec.empty()) die("--suite order-theorems needs --model");
    const Model model(v_model_spec);
    check_status(ot_verify_order_theorems(model.get(), v_n, seed, grid_points, value_sigmas,
                                          ineq_sigmas, v_threads, &report));
  }
  return emit_report(suite, report, format);
}
