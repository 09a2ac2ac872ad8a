// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmp.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace ordertau::exact {

// Arbitrary-precision signed integer. RAII wrapper around GMP's mpz_t.
class BigInt {
public:
  BigInt() { mpz_init(z_); }
  BigInt(long value) { mpz_init_set_si(z_, value); }  // NOLINT: implicit by design of the scalar type
  explicit BigInt(std::string_view digits);
  BigInt(const BigInt& other) { mpz_init_set(z_, other.z_); }
  BigInt(BigInt&& other) noexcept {
    mpz_init(z_);
    mpz_swap(z_, other.z_);
  }
  BigInt& operator=(const BigInt& other) {
    if (this != &other) mpz_set(z_, other.z_);
    return *this;
  }
  BigInt& operator=(BigInt&& other) noexcept {
    mpz_swap(z_, other.z_);
    return *this;
  }
  ~BigInt() { mpz_clear(z_); }

  static BigInt factorial(unsigned long n);
  static BigInt binomial(unsigned long n, unsigned long k);
  static BigInt pow2(unsigned long k);

  BigInt& operator+=(const BigInt& rhs) {
    mpz_add(z_, z_, rhs.z_);
    return *this;
  }
  BigInt& operator-=(const BigInt& rhs) {
    mpz_sub(z_, z_, rhs.z_);
    return *this;
  }
  BigInt& operator*=(const BigInt& rhs) {
    mpz_mul(z_, z_, rhs.z_);
    return *this;
  }
  friend BigInt operator+(BigInt lhs, const BigInt& rhs) { return lhs += rhs; }
  friend BigInt operator-(BigInt lhs, const BigInt& rhs) { return lhs -= rhs; }
  friend BigInt operator*(BigInt lhs, const BigInt& rhs) { return lhs *= rhs; }
  BigInt operator-() const {
    BigInt r(*this);
    mpz_neg(r.z_, r.z_);
    return r;
  }

  friend bool operator==(const BigInt& a, const BigInt& b) { return mpz_cmp(a.z_, b.z_) == 0; }
  friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
    const int c = mpz_cmp(a.z_, b.z_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  int sign() const { return mpz_sgn(z_); }
  bool is_zero() const { return mpz_sgn(z_) == 0; }
  std::string str() const;
  double to_double() const { return mpz_get_d(z_); }

  mpz_srcptr raw() const { return z_; }

private:
  mpz_t z_;
};

// Exact rational number. Always in lowest terms with a positive denominator;
// arithmetic never rounds. RAII wrapper around GMP's mpq_t.
class Rational {
public:
  Rational() { mpq_init(q_); }
  Rational(long value) {  // NOLINT: implicit by design of the scalar type
    mpq_init(q_);
    mpq_set_si(q_, value, 1);
  }
  Rational(long num, long den);
  Rational(const BigInt& num, const BigInt& den);
  explicit Rational(const BigInt& num);
  Rational(const Rational& other) {
    mpq_init(q_);
    mpq_set(q_, other.q_);
  }
  Rational(Rational&& other) noexcept {
    mpq_init(q_);
    mpq_swap(q_, other.q_);
  }
  Rational& operator=(const Rational& other) {
    if (this != &other) mpq_set(q_, other.q_);
    return *this;
  }
  Rational& operator=(Rational&& other) noexcept {
    mpq_swap(q_, other.q_);
    return *this;
  }
  ~Rational() { mpq_clear(q_); }

  // Accepts "p", "p/q" and, when allow_decimal is set, finite decimals like
  // "0.25" (converted exactly). Throws std::invalid_argument otherwise.
  static Rational parse(std::string_view text, bool allow_decimal = false);

  Rational& operator+=(const Rational& rhs) {
    mpq_add(q_, q_, rhs.q_);
    return *this;
  }
  Rational& operator-=(const Rational& rhs) {
    mpq_sub(q_, q_, rhs.q_);
    return *this;
  }
  Rational& operator*=(const Rational& rhs) {
    mpq_mul(q_, q_, rhs.q_);
    return *this;
  }
  Rational& operator/=(const Rational& rhs);
  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  Rational operator-() const {
    Rational r(*this);
    mpq_neg(r.q_, r.q_);
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.q_, b.q_) != 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = mpq_cmp(a.q_, b.q_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  int sign() const { return mpq_sgn(q_); }
  bool is_zero() const { return mpq_sgn(q_) == 0; }
  Rational abs() const {
    Rational r(*this);
    mpq_abs(r.q_, r.q_);
    return r;
  }
  Rational reciprocal() const;

  BigInt numerator() const;
  BigInt denominator() const;

  // Canonical form: "p" when the denominator is 1, else "p/q".
  std::string str() const;
  double to_double() const { return mpq_get_d(q_); }

private:
  mpq_t q_;
};

// C(y, k) = y (y-1) ... (y-k+1) / k! for arbitrary rational y.
Rational binomial_rational(const Rational& y, unsigned long k);

Rational pow_rational(const Rational& base, unsigned long e);

}  // namespace ordertau::exact
