// SPDX-License-Identifier: Apache-2.0
#include "poly.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ordertau::exact {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

SparsePoly::SparsePoly(int dimension) : dim_(dimension) {
  require(dimension >= 0, "polynomial dimension must be nonnegative");
}

SparsePoly SparsePoly::constant(int dimension, Rational c) {
  SparsePoly p(dimension);
  if (!c.is_zero()) p.terms_.emplace(ExponentVec(static_cast<std::size_t>(dimension), 0U), std::move(c));
  return p;
}

SparsePoly SparsePoly::variable(int dimension, int var) {
  require(var >= 1 && var <= dimension, "variable u_" + std::to_string(var) + " out of range for dimension " + std::to_string(dimension));
  ExponentVec e(static_cast<std::size_t>(dimension), 0U);
  e[static_cast<std::size_t>(var - 1)] = 1U;
  return monomial(dimension, std::move(e), Rational(1L));
}

SparsePoly SparsePoly::monomial(int dimension, ExponentVec exps, Rational c) {
  require(exps.size() == static_cast<std::size_t>(dimension), "exponent vector length must equal dimension");
  SparsePoly p(dimension);
  if (!c.is_zero()) p.terms_.emplace(std::move(exps), std::move(c));
  return p;
}

Rational SparsePoly::coefficient(const ExponentVec& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0L) : it->second;
}

unsigned SparsePoly::total_degree() const {
  unsigned deg = 0;
  for (const auto& [e, c] : terms_) {
    unsigned d = 0;
    for (unsigned x : e) d += x;
    deg = std::max(deg, d);
  }
  return deg;
}

void SparsePoly::add_term(const ExponentVec& e, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& rhs) {
  require(dim_ == rhs.dim_, "dimension mismatch in polynomial addition");
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& rhs) {
  require(dim_ == rhs.dim_, "dimension mismatch in polynomial subtraction");
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

SparsePoly operator*(const SparsePoly& lhs, const SparsePoly& rhs) {
  require(lhs.dim_ == rhs.dim_, "dimension mismatch in polynomial multiplication");
  SparsePoly out(lhs.dim_);
  ExponentVec e(static_cast<std::size_t>(lhs.dim_), 0U);
  for (const auto& [ea, ca] : lhs.terms_) {
    for (const auto& [eb, cb] : rhs.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

SparsePoly SparsePoly::scaled(const Rational& c) const {
  SparsePoly out(dim_);
  if (c.is_zero()) return out;
  for (const auto& [e, coeff] : terms_) out.terms_.emplace(e, coeff * c);
  return out;
}

Rational SparsePoly::eval(std::span<const Rational> point) const {
  require(point.size() == static_cast<std::size_t>(dim_), "evaluation point has wrong dimension");
  Rational acc(0L);
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) t *= pow_rational(point[i], e[i]);
    acc += t;
  }
  return acc;
}

double SparsePoly::eval_f64(std::span<const double> point) const {
  require(point.size() == static_cast<std::size_t>(dim_), "evaluation point has wrong dimension");
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.to_double();
    for (std::size_t i = 0; i < e.size(); ++i)
      for (unsigned k = 0; k < e[i]; ++k) t *= point[i];
    acc += t;
  }
  return acc;
}

SparsePoly SparsePoly::promoted(int new_dimension) const {
  require(new_dimension >= dim_, "promotion cannot shrink the variable space");
  SparsePoly out(new_dimension);
  for (const auto& [e, c] : terms_) {
    ExponentVec ne(static_cast<std::size_t>(new_dimension), 0U);
    std::copy(e.begin(), e.end(), ne.begin());
    out.terms_.emplace(std::move(ne), c);
  }
  return out;
}

SparsePoly SparsePoly::substitute(const std::vector<int>& target) const {
  require(target.size() == static_cast<std::size_t>(dim_), "substitution map length must equal dimension");
  for (int t : target) require(t >= 0 && t <= dim_, "substitution target out of range");
  SparsePoly out(dim_);
  ExponentVec ne(static_cast<std::size_t>(dim_), 0U);
  for (const auto& [e, c] : terms_) {
    std::fill(ne.begin(), ne.end(), 0U);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0 || target[i] == 0) continue;  // u^0 and pin-to-1 both drop
      ne[static_cast<std::size_t>(target[i] - 1)] += e[i];
    }
    out.add_term(ne, c);
  }
  return out;
}

SparsePoly SparsePoly::integrate_step(int var) const {
  require(var >= 1 && var < dim_, "integration variable u_" + std::to_string(var) + " must have a successor in dimension " + std::to_string(dim_));
  const auto v = static_cast<std::size_t>(var - 1);
  SparsePoly out(dim_);
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = 0; i < v; ++i)
      require(e[i] == 0, "integrand still depends on u_" + std::to_string(i + 1) + ", which was already integrated out");
    ExponentVec ne = e;
    const unsigned a = ne[v];
    ne[v] = 0;
    ne[v + 1] += a + 1;  // antiderivative evaluated at the upper limit u_{var+1}
    out.add_term(ne, c / Rational(static_cast<long>(a) + 1));
  }
  return out;
}

Rational simplex_integral(const SparsePoly& p) {
  const int d = p.dimension();
  if (d == 0) {
    // Zero-dimensional integral over a point: the constant itself.
    return p.is_zero() ? Rational(0L) : p.terms().begin()->second;
  }
  SparsePoly q = p;
  for (int var = 1; var < d; ++var) q = q.integrate_step(var);
  // Last variable: antiderivative evaluated at 1.
  Rational acc(0L);
  for (const auto& [e, c] : q.terms()) acc += c / Rational(static_cast<long>(e[static_cast<std::size_t>(d - 1)]) + 1);
  return acc;
}

SparsePoly hessenberg_determinant(const std::vector<std::vector<SparsePoly>>& a) {
  const std::size_t n = a.size();
  require(n >= 1, "empty matrix");
  const int dim = a[0][0].dimension();
  const SparsePoly one = SparsePoly::constant(dim, Rational(1L));
  for (std::size_t i = 0; i < n; ++i) {
    require(a[i].size() == n, "matrix must be square");
    for (std::size_t j = 0; j + 2 <= i; ++j) require(a[i][j].is_zero(), "entry below the first subdiagonal is nonzero");
    if (i >= 1) require(a[i][i - 1] == one, "subdiagonal entry is not 1");
  }
  std::vector<SparsePoly> minors;
  minors.reserve(n + 1);
  minors.push_back(one);  // det of the empty matrix
  for (std::size_t k = 1; k <= n; ++k) {
    SparsePoly det(dim);
    for (std::size_t i = 1; i <= k; ++i) {
      SparsePoly term = a[i - 1][k - 1] * minors[i - 1];
      if ((i + k) % 2 == 1) term = term.scaled(Rational(-1L));
      det += term;
    }
    minors.push_back(std::move(det));
  }
  return minors[n];
}

}  // namespace ordertau::exact
