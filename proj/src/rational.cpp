// SPDX-License-Identifier: Apache-2.0
#include "rational.hpp"

#include <memory>
#include <stdexcept>

namespace ordertau::exact {

namespace {

std::string mpz_to_string(mpz_srcptr z) {
  // +2: sign and NUL.
  const std::size_t len = mpz_sizeinbase(z, 10) + 2;
  std::string buf(len, '\0');
  mpz_get_str(buf.data(), 10, z);
  buf.resize(buf.find('\0'));
  return buf;
}

bool valid_integer_token(std::string_view s) {
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

BigInt::BigInt(std::string_view digits) {
  if (!valid_integer_token(digits)) throw std::invalid_argument("not an integer: '" + std::string(digits) + "'");
  mpz_init_set_str(z_, std::string(digits).c_str(), 10);
}

BigInt BigInt::factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.z_, n);
  return r;
}

BigInt BigInt::binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.z_, n, k);
  return r;
}

BigInt BigInt::pow2(unsigned long k) {
  BigInt r(1L);
  mpz_mul_2exp(r.z_, r.z_, k);
  return r;
}

std::string BigInt::str() const { return mpz_to_string(z_); }

Rational::Rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  mpq_init(q_);
  if (den < 0) {
    num = -num;
    den = -den;
  }
  mpq_set_si(q_, num, static_cast<unsigned long>(den));
  mpq_canonicalize(q_);
}

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den.is_zero()) throw std::invalid_argument("rational with zero denominator");
  mpq_init(q_);
  mpq_set_num(q_, num.raw());
  mpq_set_den(q_, den.raw());
  mpq_canonicalize(q_);
}

Rational::Rational(const BigInt& num) {
  mpq_init(q_);
  mpq_set_z(q_, num.raw());
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw std::invalid_argument("rational division by zero");
  mpq_div(q_, q_, rhs.q_);
  return *this;
}

Rational Rational::reciprocal() const {
  if (is_zero()) throw std::invalid_argument("reciprocal of zero");
  Rational r(*this);
  mpq_inv(r.q_, r.q_);
  return r;
}

BigInt Rational::numerator() const { return BigInt(mpz_to_string(mpq_numref(q_))); }

BigInt Rational::denominator() const { return BigInt(mpz_to_string(mpq_denref(q_))); }

std::string Rational::str() const {
  std::string s = mpz_to_string(mpq_numref(q_));
  if (mpz_cmp_ui(mpq_denref(q_), 1) != 0) {
    s += '/';
    s += mpz_to_string(mpq_denref(q_));
  }
  return s;
}

Rational Rational::parse(std::string_view text, bool allow_decimal) {
  const auto fail = [&]() -> Rational {
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  };
  if (text.empty()) return fail();

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = text.substr(slash + 1);
    if (!valid_integer_token(num) || !valid_integer_token(den)) return fail();
    const BigInt d{den};
    if (d.is_zero()) return fail();
    if (d.sign() < 0) return Rational(-BigInt{num}, -d);
    return Rational(BigInt{num}, d);
  }

  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    if (!allow_decimal) throw std::invalid_argument("decimal input not accepted here (exact rationals only): '" + std::string(text) + "'");
    std::string_view ipart = text.substr(0, dot);
    std::string_view fpart = text.substr(dot + 1);
    bool negative = false;
    if (!ipart.empty() && (ipart.front() == '+' || ipart.front() == '-')) {
      negative = ipart.front() == '-';
      ipart.remove_prefix(1);
    }
    if (ipart.empty() && fpart.empty()) return fail();
    for (char c : ipart)
      if (c < '0' || c > '9') return fail();
    for (char c : fpart)
      if (c < '0' || c > '9') return fail();
    BigInt num = ipart.empty() ? BigInt(0L) : BigInt{ipart};
    BigInt den(1L);
    const BigInt ten(10L);
    for (char c : fpart) {
      num = num * ten + BigInt(static_cast<long>(c - '0'));
      den *= ten;
    }
    if (negative) num = -num;
    return Rational(num, den);
  }

  if (!valid_integer_token(text)) return fail();
  return Rational(BigInt{text}, BigInt(1L));
}

Rational binomial_rational(const Rational& y, unsigned long k) {
  Rational num(1L);
  for (unsigned long i = 0; i < k; ++i) num *= y - Rational(static_cast<long>(i));
  return num / Rational(BigInt::factorial(k));
}

Rational pow_rational(const Rational& base, unsigned long e) {
  Rational r(1L);
  Rational b = base;
  while (e > 0) {
    if (e & 1UL) r *= b;
    b *= b;
    e >>= 1UL;
  }
  return r;
}

}  // namespace ordertau::exact
