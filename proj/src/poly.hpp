// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <span>
#include <vector>

#include "rational.hpp"

namespace ordertau::exact {

// Exponents of one monomial in u_1..u_d; entry i is the power of u_{i+1}.
using ExponentVec = std::vector<unsigned>;

// Multivariate polynomial with exact rational coefficients, stored sparsely
// as exponent-vector -> coefficient. Zero coefficients are never stored.
// Values are immutable in spirit: every operation returns a new polynomial,
// so concurrent read-only use is safe.
class SparsePoly {
public:
  explicit SparsePoly(int dimension);

  static SparsePoly constant(int dimension, Rational c);
  // u_var, 1-based.
  static SparsePoly variable(int dimension, int var);
  static SparsePoly monomial(int dimension, ExponentVec exps, Rational c);

  int dimension() const { return dim_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<ExponentVec, Rational>& terms() const { return terms_; }
  Rational coefficient(const ExponentVec& e) const;
  unsigned total_degree() const;

  SparsePoly& operator+=(const SparsePoly& rhs);
  SparsePoly& operator-=(const SparsePoly& rhs);
  friend SparsePoly operator+(SparsePoly lhs, const SparsePoly& rhs) { return lhs += rhs; }
  friend SparsePoly operator-(SparsePoly lhs, const SparsePoly& rhs) { return lhs -= rhs; }
  friend SparsePoly operator*(const SparsePoly& lhs, const SparsePoly& rhs);
  SparsePoly scaled(const Rational& c) const;

  bool operator==(const SparsePoly& rhs) const { return dim_ == rhs.dim_ && terms_ == rhs.terms_; }

  Rational eval(std::span<const Rational> point) const;
  double eval_f64(std::span<const double> point) const;

  // Same polynomial viewed in a larger variable space.
  SparsePoly promoted(int new_dimension) const;

  // Per-variable substitution map of length dimension(): entry i (0-based)
  // is a 1-based variable index receiving u_{i+1}'s exponent, or 0 to pin
  // u_{i+1} to the constant 1.
  SparsePoly substitute(const std::vector<int>& target) const;

  // One step of the iterated integral over the ordered region
  // {u_1 <= ... <= u_d}: integrates u_var over [0, u_{var+1}]. Requires
  // 1 <= var < dimension and that variables below var no longer occur.
  SparsePoly integrate_step(int var) const;

private:
  void add_term(const ExponentVec& e, const Rational& c);

  int dim_;
  std::map<ExponentVec, Rational> terms_;
};

// Iterated integral of p over {0 <= u_1 <= ... <= u_d <= 1}, exact.
Rational simplex_integral(const SparsePoly& p);

// Determinant of an upper Hessenberg matrix with unit subdiagonal, by the
// recursion det(A_n) = sum_i (-1)^(i+n) a_{i,n} det(A_{i-1}) over leading
// principal minors. Entries below the first subdiagonal must be zero and
// the subdiagonal must be the constant 1; both are checked.
SparsePoly hessenberg_determinant(const std::vector<std::vector<SparsePoly>>& a);

}  // namespace ordertau::exact
