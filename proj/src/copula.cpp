// SPDX-License-Identifier: Apache-2.0
#include "copula.hpp"

#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "product_order.hpp"

namespace ordertau::lab {

using exact::Rational;

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

const Rational kZero(0L);
const Rational kOne(1L);
const Rational kHalf(1L, 2L);

Rational rat_min(const Rational& a, const Rational& b) { return a < b ? a : b; }
Rational rat_max(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational rat_clamp(const Rational& x, const Rational& lo, const Rational& hi) {
  return rat_min(rat_max(x, lo), hi);
}

constexpr int kMaxModelDimension = 32;

}  // namespace

int CopulaModel::dimension() const {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ProductCopula> || std::is_same_v<T, FrechetMCopula>)
          return m.d;
        else if constexpr (std::is_same_v<T, FrechetWCopula>)
          return 2;
        else if constexpr (std::is_same_v<T, ShuffleOfM>)
          return 2;
        else
          return m.components.front().dimension();
      },
      variant());
}

std::string CopulaModel::describe() const {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ProductCopula>) {
          return "product:" + std::to_string(m.d);
        } else if constexpr (std::is_same_v<T, FrechetMCopula>) {
          return "frechetM:" + std::to_string(m.d);
        } else if constexpr (std::is_same_v<T, FrechetWCopula>) {
          return "frechetW";
        } else if constexpr (std::is_same_v<T, ShuffleOfM>) {
          std::ostringstream os;
          os << "shuffleM:";
          for (std::size_t i = 0; i < m.segments.size(); ++i) {
            const auto& s = m.segments[i];
            if (i) os << ';';
            os << s.a1.str() << ' ' << s.a2.str() << ' ' << (s.a1 + s.len).str() << ' '
               << (s.a2 + s.len).str();
          }
          return os.str();
        } else {
          std::ostringstream os;
          os << "mix:";
          for (std::size_t i = 0; i < m.components.size(); ++i) {
            if (i) os << '+';
            os << m.weights[i].str() << '*';
            // Emit the grammar tokens so the canonical form parses back.
            const auto& cv = m.components[i].variant();
            if (std::holds_alternative<FrechetMCopula>(cv) && m.components[i].dimension() == 2)
              os << 'M';
            else if (std::holds_alternative<FrechetWCopula>(cv))
              os << 'W';
            else if (std::holds_alternative<ProductCopula>(cv) && m.components[i].dimension() == 2)
              os << "Pi";
            else
              os << m.components[i].describe();
          }
          return os.str();
        }
      },
      variant());
}

CopulaModel make_product(int d) {
  require(d >= 2 && d <= kMaxModelDimension, "product copula dimension must lie in 2.." + std::to_string(kMaxModelDimension));
  return CopulaModel(ProductCopula{d});
}

CopulaModel make_frechet_m(int d) {
  require(d >= 2 && d <= kMaxModelDimension, "comonotone copula dimension must lie in 2.." + std::to_string(kMaxModelDimension));
  return CopulaModel(FrechetMCopula{d});
}

CopulaModel make_frechet_w() { return CopulaModel(FrechetWCopula{}); }

namespace {

void validate_partition(std::vector<std::pair<Rational, Rational>> intervals, const char* axis) {
  std::sort(intervals.begin(), intervals.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  require(intervals.front().first == kZero,
          std::string("shuffle segments do not start at 0 on the ") + axis + " axis");
  for (std::size_t i = 0; i + 1 < intervals.size(); ++i)
    require(intervals[i].second == intervals[i + 1].first,
            std::string("shuffle segments do not partition [0,1] on the ") + axis + " axis");
  require(intervals.back().second == kOne,
          std::string("shuffle segments do not end at 1 on the ") + axis + " axis");
}

}  // namespace

CopulaModel make_shuffle(std::vector<Segment> segments) {
  require(!segments.empty(), "shuffle needs at least one segment");
  std::vector<std::pair<Rational, Rational>> first, second;
  Rational total(0L);
  for (const auto& s : segments) {
    require(s.len.sign() > 0, "shuffle segment length must be positive");
    require(s.a1.sign() >= 0 && s.a2.sign() >= 0 && s.a1 + s.len <= kOne && s.a2 + s.len <= kOne,
            "shuffle segment leaves the unit square");
    first.emplace_back(s.a1, s.a1 + s.len);
    second.emplace_back(s.a2, s.a2 + s.len);
    total += s.len;
  }
  validate_partition(std::move(first), "first");
  validate_partition(std::move(second), "second");
  require(total == kOne, "shuffle segment lengths must sum to 1");
  return CopulaModel(ShuffleOfM{std::move(segments)});
}

CopulaModel make_mixture(std::vector<Rational> weights, std::vector<CopulaModel> components) {
  require(!components.empty() && weights.size() == components.size(),
          "mixture needs matching weight and component lists");
  Rational total(0L);
  for (const auto& w : weights) {
    require(w.sign() >= 0, "mixture weights must be nonnegative");
    total += w;
  }
  require(total == kOne, "mixture weights must sum to 1 exactly (got " + total.str() + ")");
  const int d = components.front().dimension();
  for (const auto& c : components)
    require(c.dimension() == d, "mixture components must share one dimension");
  return CopulaModel(Mixture{std::move(weights), std::move(components)});
}

CopulaModel shuffle_preset(char name) {
  const Rational q(1L, 4L);
  if (name == 'A') {
    return make_shuffle({{Rational(0L), Rational(2L, 4L), q},
                         {Rational(1L, 4L), Rational(3L, 4L), q},
                         {Rational(2L, 4L), Rational(0L), q},
                         {Rational(3L, 4L), Rational(1L, 4L), q}});
  }
  if (name == 'B') {
    return make_shuffle({{Rational(0L), Rational(0L), q},
                         {Rational(1L, 4L), Rational(3L, 4L), q},
                         {Rational(2L, 4L), Rational(2L, 4L), q},
                         {Rational(3L, 4L), Rational(1L, 4L), q}});
  }
  throw std::invalid_argument("unknown shuffle preset (expected A or B)");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    if (pos == std::string_view::npos) {
      out.push_back(s);
      return out;
    }
    out.push_back(s.substr(0, pos));
    s.remove_prefix(pos + 1);
  }
}

int parse_dimension(std::string_view text, const std::string& what) {
  int value = 0;
  for (char c : text) {
    if (c < '0' || c > '9' || value > kMaxModelDimension) throw parse_error("bad " + what + " dimension: '" + std::string(text) + "'");
    value = value * 10 + (c - '0');
  }
  if (text.empty()) throw parse_error("missing " + what + " dimension");
  return value;
}

Rational parse_exact_rational(std::string_view text, bool allow_decimal, const std::string& what) {
  try {
    return Rational::parse(trim(text), allow_decimal);
  } catch (const std::invalid_argument& e) {
    throw parse_error(what + ": " + e.what());
  }
}

CopulaModel parse_mixture_spec(std::string_view rest) {
  std::vector<Rational> weights;
  std::vector<CopulaModel> components;
  for (std::string_view term : split(rest, '+')) {
    term = trim(term);
    const auto star = term.find('*');
    if (star == std::string_view::npos) throw parse_error("mixture term must look like weight*component: '" + std::string(term) + "'");
    weights.push_back(parse_exact_rational(term.substr(0, star), /*allow_decimal=*/true, "mixture weight"));
    const std::string_view name = trim(term.substr(star + 1));
    if (name == "M")
      components.push_back(make_frechet_m(2));
    else if (name == "W")
      components.push_back(make_frechet_w());
    else if (name == "Pi" || name == "P")
      components.push_back(make_product(2));
    else
      throw parse_error("unknown mixture component '" + std::string(name) + "' (expected M, W or Pi)");
  }
  try {
    return make_mixture(std::move(weights), std::move(components));
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
}

CopulaModel parse_shuffle_spec(std::string_view rest) {
  rest = trim(rest);
  if (rest == "A" || rest == "B") return shuffle_preset(rest[0]);
  std::vector<Segment> segments;
  for (std::string_view part : split(rest, ';')) {
    part = trim(part);
    std::vector<std::string_view> tokens;
    for (std::string_view t : split(part, ' '))
      if (!trim(t).empty()) tokens.push_back(trim(t));
    if (tokens.size() != 4) throw parse_error("shuffle segment must be four rationals 'a1 a2 b1 b2': '" + std::string(part) + "'");
    const Rational a1 = parse_exact_rational(tokens[0], false, "shuffle segment");
    const Rational a2 = parse_exact_rational(tokens[1], false, "shuffle segment");
    const Rational b1 = parse_exact_rational(tokens[2], false, "shuffle segment");
    const Rational b2 = parse_exact_rational(tokens[3], false, "shuffle segment");
    if (!(b1 - a1 == b2 - a2)) throw parse_error("shuffle segment must have equal extents in both coordinates: '" + std::string(part) + "'");
    segments.push_back({a1, a2, b1 - a1});
  }
  try {
    return make_shuffle(std::move(segments));
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
}

}  // namespace

CopulaModel parse_model(std::string_view spec) {
  const std::string_view s = trim(spec);
  const auto colon = s.find(':');
  const std::string_view head = colon == std::string_view::npos ? s : s.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : s.substr(colon + 1);

  try {
    if (head == "product" || head == "pi" || head == "Pi") return make_product(parse_dimension(rest, "product"));
    if (head == "frechetM" || head == "M")
      return make_frechet_m(colon == std::string_view::npos ? 2 : parse_dimension(rest, "comonotone"));
    if (head == "frechetW" || head == "W") {
      if (colon != std::string_view::npos) throw parse_error("frechetW is bivariate; it takes no dimension");
      return make_frechet_w();
    }
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
  if (head == "shuffleM") return parse_shuffle_spec(rest);
  if (head == "mix") return parse_mixture_spec(rest);
  throw parse_error("unknown model spec '" + std::string(spec) +
                    "' (expected product:D, frechetM:D, frechetW, shuffleM:..., mix:...)");
}

namespace {

Rational shuffle_eval(const ShuffleOfM& s, const Rational& u1, const Rational& u2) {
  Rational acc(0L);
  for (const auto& seg : s.segments) acc += rat_clamp(rat_min(u1 - seg.a1, u2 - seg.a2), kZero, seg.len);
  return acc;
}

}  // namespace

Rational eval_copula(const CopulaModel& model, std::span<const Rational> u) {
  require(static_cast<int>(u.size()) == model.dimension(), "evaluation point has wrong dimension");
  for (const auto& x : u) require(x.sign() >= 0 && x <= kOne, "evaluation point outside the unit cube");
  return std::visit(
      [&](const auto& m) -> Rational {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ProductCopula>) {
          Rational acc(1L);
          for (const auto& x : u) acc *= x;
          return acc;
        } else if constexpr (std::is_same_v<T, FrechetMCopula>) {
          Rational acc = u[0];
          for (const auto& x : u.subspan(1)) acc = rat_min(acc, x);
          return acc;
        } else if constexpr (std::is_same_v<T, FrechetWCopula>) {
          return rat_max(u[0] + u[1] - kOne, kZero);
        } else if constexpr (std::is_same_v<T, ShuffleOfM>) {
          return shuffle_eval(m, u[0], u[1]);
        } else {
          Rational acc(0L);
          for (std::size_t i = 0; i < m.components.size(); ++i)
            acc += m.weights[i] * eval_copula(m.components[i], u);
          return acc;
        }
      },
      model.variant());
}

double eval_copula_f64(const CopulaModel& model, std::span<const double> u) {
  require(static_cast<int>(u.size()) == model.dimension(), "evaluation point has wrong dimension");
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ProductCopula>) {
          double acc = 1.0;
          for (double x : u) acc *= x;
          return acc;
        } else if constexpr (std::is_same_v<T, FrechetMCopula>) {
          double acc = u[0];
          for (double x : u.subspan(1)) acc = std::min(acc, x);
          return acc;
        } else if constexpr (std::is_same_v<T, FrechetWCopula>) {
          return std::max(u[0] + u[1] - 1.0, 0.0);
        } else if constexpr (std::is_same_v<T, ShuffleOfM>) {
          double acc = 0.0;
          for (const auto& seg : m.segments) {
            const double len = seg.len.to_double();
            const double t = std::min(u[0] - seg.a1.to_double(), u[1] - seg.a2.to_double());
            acc += std::clamp(t, 0.0, len);
          }
          return acc;
        } else {
          double acc = 0.0;
          for (std::size_t i = 0; i < m.components.size(); ++i)
            acc += m.weights[i].to_double() * eval_copula_f64(m.components[i], u);
          return acc;
        }
      },
      model.variant());
}

// ---- Exact shuffle integrals ----------------------------------------------

namespace {

// Exact integral over [0, len] of a continuous piecewise-linear map given by
// an exact evaluator and a superset of its breakpoints.
Rational integrate_piecewise_linear(const Rational& len, std::vector<Rational> breakpoints,
                                    const std::function<Rational(const Rational&)>& f) {
  breakpoints.push_back(kZero);
  breakpoints.push_back(len);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  Rational acc(0L);
  Rational prev_t = kZero;
  Rational prev_f = f(kZero);
  for (const auto& t : breakpoints) {
    if (t <= kZero || len < t) continue;
    const Rational ft = f(t);
    acc += (t - prev_t) * (prev_f + ft) * kHalf;
    prev_t = t;
    prev_f = ft;
  }
  return acc;
}

}  // namespace

Rational shuffle_bracket(const ShuffleOfM& s) {
  Rational acc(0L);
  for (const auto& seg : s.segments) {
    std::vector<Rational> breaks;
    for (const auto& other : s.segments) {
      // clamp(min(a1-o.a1, a2-o.a2) + t, 0, o.len) changes slope here:
      const Rational offset = rat_min(seg.a1 - other.a1, seg.a2 - other.a2);
      breaks.push_back(-offset);
      breaks.push_back(other.len - offset);
    }
    acc += integrate_piecewise_linear(seg.len, std::move(breaks), [&](const Rational& t) {
      return shuffle_eval(s, seg.a1 + t, seg.a2 + t);
    });
  }
  return acc;
}

namespace {

Rational shuffle_diagonal_integral(const ShuffleOfM& s) {
  Rational acc(0L);
  for (const auto& seg : s.segments) {
    const Rational lo = rat_min(seg.a1, seg.a2);
    std::vector<Rational> breaks;
    for (const auto& other : s.segments) {
      const Rational hi = rat_max(other.a1, other.a2);
      breaks.push_back(hi - lo);
      breaks.push_back(hi + other.len - lo);
    }
    acc += integrate_piecewise_linear(seg.len, std::move(breaks), [&](const Rational& t) {
      const Rational m = rat_clamp(lo + t, kZero, kOne);
      return shuffle_eval(s, m, m);
    });
  }
  return acc;
}

}  // namespace

bool shuffle_is_exchangeable(const ShuffleOfM& s) {
  std::set<Rational> coords;
  for (int i = 0; i <= 16; ++i) coords.insert(Rational(i, 16L));
  for (const auto& seg : s.segments) {
    for (const Rational& c : {seg.a1, seg.a2, seg.a1 + seg.len, seg.a2 + seg.len}) {
      coords.insert(c);
      coords.insert(rat_clamp(c + Rational(1L, 32L), kZero, kOne));
      coords.insert(rat_clamp(c - Rational(1L, 32L), kZero, kOne));
    }
  }
  for (const auto& x : coords)
    for (const auto& y : coords)
      if (!(shuffle_eval(s, x, y) == shuffle_eval(s, y, x))) return false;
  return true;
}

Rational shuffle_order_bracket(const ShuffleOfM& s) {
  if (!shuffle_is_exchangeable(s))
    throw unsupported_error("order-transform bracket identity needs an exchangeable shuffle");
  return Rational(2L) * shuffle_bracket(s) - shuffle_diagonal_integral(s);
}

// ---- Bivariate M/W mixtures ------------------------------------------------

std::optional<Rational> mw_mixture_weight(const CopulaModel& model) {
  const auto* mix = std::get_if<Mixture>(&model.variant());
  if (mix == nullptr) {
    if (std::holds_alternative<FrechetMCopula>(model.variant()) && model.dimension() == 2)
      return kOne;  // pure comonotone counts as weight 1
    return std::nullopt;
  }
  Rational wm(0L);
  for (std::size_t i = 0; i < mix->components.size(); ++i) {
    const auto& v = mix->components[i].variant();
    if (std::holds_alternative<FrechetMCopula>(v) && mix->components[i].dimension() == 2)
      wm += mix->weights[i];
    else if (std::holds_alternative<FrechetWCopula>(v))
      continue;
    else
      return std::nullopt;
  }
  return wm;
}

Rational mw_order_cdf(const Rational& wm, const Rational& x1, const Rational& x2) {
  require(wm.sign() >= 0 && wm <= kOne, "mixture weight must lie in [0,1]");
  const Rational ww = kOne - wm;
  const auto cdf01 = [](const Rational& x) { return rat_clamp(x, kZero, kOne); };
  const Rational part_m = cdf01(rat_min(x1, x2));
  const Rational part_w = rat_max(cdf01(x1 + x1) + rat_max(Rational(2L) * cdf01(x2) - kOne, kZero) - kOne, kZero);
  return wm * part_m + ww * part_w;
}

double mw_order_cdf_f64(double wm, double x1, double x2) {
  const auto cdf01 = [](double x) { return std::clamp(x, 0.0, 1.0); };
  const double part_m = cdf01(std::min(x1, x2));
  const double part_w = std::max(cdf01(2.0 * x1) + std::max(2.0 * cdf01(x2) - 1.0, 0.0) - 1.0, 0.0);
  return wm * part_m + (1.0 - wm) * part_w;
}

Rational eval_mw_order_transform(const Rational& wm, const Rational& u1, const Rational& u2) {
  require(wm.sign() > 0 && wm <= kOne, "order transform of the mixture needs a positive comonotone weight");
  require(u1.sign() >= 0 && u1 <= kOne && u2.sign() >= 0 && u2 <= kOne, "arguments outside the unit square");
  if (u1.is_zero() || u2.is_zero()) return kZero;
  if (u1 == kOne) return u2;
  if (u2 == kOne) return u1;

  const Rational ww = kOne - wm;
  const Rational steep = wm + Rational(2L) * ww;
  // First margin: slope `steep` up to 1/2, slope wm after.
  const Rational x1 = u1 <= wm * kHalf + ww ? u1 / steep : (u1 - ww) / wm;
  // Second margin: slope wm up to 1/2, slope `steep` after.
  const Rational x2 = u2 <= wm * kHalf ? u2 / wm : (u2 + ww) / steep;
  return mw_order_cdf(wm, x1, x2);
}

// ---- Sampling and curve statistics ----------------------------------------

CompiledSampler::Node CompiledSampler::compile(const CopulaModel& model) {
  return std::visit(
      [](const auto& m) -> Node {
        using T = std::decay_t<decltype(m)>;
        Node node{};
        if constexpr (std::is_same_v<T, ProductCopula>) {
          node.kind = Node::Kind::product;
          node.d = m.d;
        } else if constexpr (std::is_same_v<T, FrechetMCopula>) {
          node.kind = Node::Kind::frechet_m;
          node.d = m.d;
        } else if constexpr (std::is_same_v<T, FrechetWCopula>) {
          node.kind = Node::Kind::frechet_w;
          node.d = 2;
        } else if constexpr (std::is_same_v<T, ShuffleOfM>) {
          node.kind = Node::Kind::shuffle;
          node.d = 2;
          for (const auto& seg : m.segments) {
            node.seg_a1.push_back(seg.a1.to_double());
            node.seg_a2.push_back(seg.a2.to_double());
            node.seg_end1.push_back((seg.a1 + seg.len).to_double());
          }
        } else {
          node.kind = Node::Kind::mixture;
          double acc = 0.0;
          for (std::size_t i = 0; i < m.components.size(); ++i) {
            acc += m.weights[i].to_double();
            node.cum_weights.push_back(acc);
            node.children.push_back(compile(m.components[i]));
          }
          node.d = node.children.front().d;
        }
        return node;
      },
      model.variant());
}

CurveStatistic::CurveStatistic(const CopulaModel& model, bool order_transform) {
  const auto& v = model.variant();
  if (std::holds_alternative<ProductCopula>(v)) {
    kind_ = order_transform ? Kind::product_order : Kind::product_plain;
    if (order_transform) {
      const auto& poly = product::order_statistic_cdf_poly(model.dimension());
      for (const auto& [e, c] : poly.terms()) cdf_poly_.emplace_back(e, c.to_double());
    }
    return;
  }
  if (std::holds_alternative<FrechetMCopula>(v)) {
    // The order transform of the comonotone copula is itself.
    kind_ = Kind::frechet_m;
    return;
  }
  if (std::holds_alternative<FrechetWCopula>(v)) {
    if (order_transform)
      throw unsupported_error("Kendall curve of the order transform is not available for frechetW");
    kind_ = Kind::frechet_w_plain;
    return;
  }
  if (const auto wm = mw_mixture_weight(model)) {
    kind_ = order_transform ? Kind::mix_mw_order : Kind::mix_mw_plain;
    weight_m_ = wm->to_double();
    return;
  }
  throw unsupported_error("Kendall curve not available for model variant '" + model.describe() + "'");
}

double CurveStatistic::operator()(std::span<double> point) const {
  switch (kind_) {
    case Kind::product_plain: {
      double acc = 1.0;
      for (double x : point) acc *= x;
      return acc;
    }
    case Kind::product_order: {
      order_transform_point(point);
      double acc = 0.0;
      for (const auto& [e, c] : cdf_poly_) {
        double t = c;
        for (std::size_t i = 0; i < e.size(); ++i)
          for (unsigned k = 0; k < e[i]; ++k) t *= point[i];
        acc += t;
      }
      return acc;
    }
    case Kind::frechet_m: {
      double acc = point[0];
      for (double x : point.subspan(1)) acc = std::min(acc, x);
      return acc;
    }
    case Kind::frechet_w_plain:
      return std::max(point[0] + point[1] - 1.0, 0.0);
    case Kind::mix_mw_plain: {
      const double m = std::min(point[0], point[1]);
      const double w = std::max(point[0] + point[1] - 1.0, 0.0);
      return weight_m_ * m + (1.0 - weight_m_) * w;
    }
    case Kind::mix_mw_order: {
      order_transform_point(point);
      return mw_order_cdf_f64(weight_m_, point[0], point[1]);
    }
  }
  return 0.0;  // unreachable
}

}  // namespace ordertau::lab
