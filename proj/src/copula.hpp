// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

// Sampleable and exactly evaluable copula models: independent uniforms, the
// Frechet-Hoeffding bounds, straight shuffles of the comonotone copula, and
// convex mixtures. Models are immutable after construction.
namespace ordertau::lab {

struct ProductCopula {
  int d;
};

struct FrechetMCopula {
  int d;
};

// Bivariate only.
struct FrechetWCopula {};

// Mass on the slope-1 segment {(a1 + t, a2 + t) : t in [0, len]}.
struct Segment {
  exact::Rational a1, a2, len;
};

// The first-coordinate intervals of the segments partition [0,1] up to
// endpoints, and so do the second-coordinate intervals.
struct ShuffleOfM {
  std::vector<Segment> segments;
};

class CopulaModel;

struct Mixture {
  std::vector<exact::Rational> weights;  // nonnegative, sum to 1
  std::vector<CopulaModel> components;   // equal dimensions
};

class CopulaModel {
public:
  using Variant = std::variant<ProductCopula, FrechetMCopula, FrechetWCopula, ShuffleOfM, Mixture>;

  explicit CopulaModel(Variant v) : v_(std::make_shared<const Variant>(std::move(v))) {}

  const Variant& variant() const { return *v_; }
  int dimension() const;
  std::string describe() const;

private:
  std::shared_ptr<const Variant> v_;
};

// Factories validate their invariants and throw std::invalid_argument.
CopulaModel make_product(int d);
CopulaModel make_frechet_m(int d);
CopulaModel make_frechet_w();
CopulaModel make_shuffle(std::vector<Segment> segments);
CopulaModel make_mixture(std::vector<exact::Rational> weights, std::vector<CopulaModel> components);

// The two bivariate straight shuffles used throughout: 'A' rearranges the
// antidiagonal halves, 'B' keeps the first quarter in place.
CopulaModel shuffle_preset(char name);

// Grammar documented in ordertau.h and the README. Throws parse_error.
CopulaModel parse_model(std::string_view spec);

// C(u) at an exact rational point in the unit cube.
exact::Rational eval_copula(const CopulaModel& model, std::span<const exact::Rational> u);
double eval_copula_f64(const CopulaModel& model, std::span<const double> u);

// Sorted rearrangement, the coordinate map applied to every sample.
inline void order_transform_point(std::span<double> x) { std::sort(x.begin(), x.end()); }
inline std::vector<double> order_transformed(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  return x;
}

// ---- Exact shuffle integrals --------------------------------------------

// Concordance integral of C against its own measure. The integrand along
// each mass segment is piecewise linear, so splitting at all projections of
// segment boundaries and applying exact trapezoids is exact.
exact::Rational shuffle_bracket(const ShuffleOfM& s);

// Checks C(u1,u2) = C(u2,u1) on the rational grid spanned by all segment
// boundaries, their midpoints and a fixed 1/16 lattice.
bool shuffle_is_exchangeable(const ShuffleOfM& s);

// Bracket of the order transform via the exchangeable bivariate identity
// 2 [C,C] - integral of C(min, min); throws unsupported_error when the
// shuffle is not exchangeable.
exact::Rational shuffle_order_bracket(const ShuffleOfM& s);

// ---- Bivariate M/W mixtures and their order transform -------------------

// Weight of the comonotone part when the model is a bivariate mixture of
// FrechetM and FrechetW components; nullopt otherwise.
std::optional<exact::Rational> mw_mixture_weight(const CopulaModel& model);

// Joint CDF of the sorted pair under the mixture with comonotone weight wm:
// wm F(min(x1,x2)) + (1-wm) (F(2 x1) + (2 F(x2) - 1)^+ - 1)^+ with F the
// uniform CDF.
exact::Rational mw_order_cdf(const exact::Rational& wm, const exact::Rational& x1,
                             const exact::Rational& x2);
double mw_order_cdf_f64(double wm, double x1, double x2);

// Order-transform copula of the mixture at a point of the open unit square,
// by exact inversion of the strictly increasing margins; needs wm > 0.
// Boundary arguments are resolved by the copula boundary conditions.
exact::Rational eval_mw_order_transform(const exact::Rational& wm, const exact::Rational& u1,
                                        const exact::Rational& u2);

// ---- Sampling ------------------------------------------------------------

// Model flattened to double precision for tight sampling loops. `unif` is
// any callable returning uniforms in [0, 1); each draw consumes a
// model-dependent but scheduling-independent number of variates.
class CompiledSampler {
public:
  explicit CompiledSampler(const CopulaModel& model) : root_(compile(model)), dim_(model.dimension()) {}

  int dimension() const { return dim_; }

  template <class U>
  void operator()(U&& unif, std::span<double> out) const {
    sample_node(root_, unif, out);
  }

private:
  struct Node {
    enum class Kind { product, frechet_m, frechet_w, shuffle, mixture };
    Kind kind;
    int d = 0;
    std::vector<double> seg_a1, seg_a2, seg_end1;  // shuffle
    std::vector<double> cum_weights;               // mixture
    std::vector<Node> children;
  };

  static Node compile(const CopulaModel& model);

  template <class U>
  static void sample_node(const Node& node, U& unif, std::span<double> out) {
    switch (node.kind) {
      case Node::Kind::product:
        for (auto& x : out) x = unif();
        return;
      case Node::Kind::frechet_m: {
        const double t = unif();
        for (auto& x : out) x = t;
        return;
      }
      case Node::Kind::frechet_w: {
        const double t = unif();
        out[0] = t;
        out[1] = 1.0 - t;
        return;
      }
      case Node::Kind::shuffle: {
        const double t = unif();
        std::size_t i = 0;
        while (i + 1 < node.seg_end1.size() && t >= node.seg_end1[i]) ++i;
        out[0] = t;
        out[1] = node.seg_a2[i] + (t - node.seg_a1[i]);
        return;
      }
      case Node::Kind::mixture: {
        const double w = unif();
        std::size_t i = 0;
        while (i + 1 < node.cum_weights.size() && w >= node.cum_weights[i]) ++i;
        sample_node(node.children[i], unif, out);
        return;
      }
    }
  }

  Node root_;
  int dim_;
};

// Statistic whose empirical CDF is the Kendall distribution function:
// C(u) for the plain curve, the sorted-sample CDF at the sorted point for
// the order-transform curve. Construction throws unsupported_error for
// variants without the required closed form.
class CurveStatistic {
public:
  CurveStatistic(const CopulaModel& model, bool order_transform);

  // Evaluates on a sample point; scratch may be reordered.
  double operator()(std::span<double> point) const;

private:
  enum class Kind { product_plain, product_order, frechet_m, frechet_w_plain, mix_mw_plain, mix_mw_order };
  Kind kind_;
  double weight_m_ = 0.0;
  std::vector<std::pair<std::vector<unsigned>, double>> cdf_poly_;  // sorted-sample CDF of uniforms
};

}  // namespace ordertau::lab
