#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "pcirc/errors.hpp"

namespace pcirc {

using Integer = mpz_class;

/// Exact rational scalar. Always reduced, denominator > 0.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(int v) : q_(v) {}
  Rational(long v) : q_(static_cast<long>(v)) {}
  Rational(const Integer& v) : q_(v) {}
  Rational(long num, long den);
  Rational(const Integer& num, const Integer& den);

  /// Parses "p/q", an integer, or a decimal literal ("0.08" == 2/25), exactly.
  static std::optional<Rational> parse(std::string_view text);

  /// 2^k for any integer k (k may be negative).
  static Rational pow2(long k);

  const Integer num() const { return q_.get_num(); }
  const Integer den() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_one() const { return q_ == 1; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

  Rational inverse() const;

  /// Canonical text form: lowest terms, "p/q" or a bare integer.
  std::string str() const;

  /// Image in Z_p; throws non_invertible_weight if the denominator is 0 mod p.
  uint64_t residue(uint64_t prime) const;

  std::size_t hash() const;

 private:
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
  mpq_class q_;
};

/// Arithmetic mod a prime < 2^63 (products go through 128-bit intermediates).
namespace modp {

inline uint64_t add(uint64_t a, uint64_t b, uint64_t p) {
  uint64_t s = a + b;
  return s >= p ? s - p : s;
}

inline uint64_t sub(uint64_t a, uint64_t b, uint64_t p) { return a >= b ? a - b : a + p - b; }

inline uint64_t mul(uint64_t a, uint64_t b, uint64_t p) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline uint64_t pow(uint64_t base, uint64_t exp, uint64_t p) {
  uint64_t r = 1 % p;
  base %= p;
  while (exp) {
    if (exp & 1) r = mul(r, base, p);
    base = mul(base, base, p);
    exp >>= 1;
  }
  return r;
}

inline uint64_t inv(uint64_t a, uint64_t p) { return pow(a, p - 2, p); }

}  // namespace modp

/// Prime used by the probabilistic identity tester and evaluate_mod.
inline constexpr uint64_t identity_prime = (uint64_t{1} << 61) - 1;

}  // namespace pcirc
