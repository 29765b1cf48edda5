#include "pcirc/rational.hpp"

#include <cctype>

namespace pcirc {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational::Rational(long num, long den) : q_(num, den) {
  if (den == 0) throw error("rational with zero denominator");
  q_.canonicalize();
}

Rational::Rational(const Integer& num, const Integer& den) : q_(num, den) {
  if (sgn(den) == 0) throw error("rational with zero denominator");
  q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw error("rational division by zero");
  q_ /= o.q_;
  return *this;
}

Rational Rational::inverse() const {
  if (is_zero()) throw error("rational division by zero");
  return Rational(mpq_class(1) / q_);
}

std::optional<Rational> Rational::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) return std::nullopt;

  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    std::string_view ns = text.substr(0, slash), ds = text.substr(slash + 1);
    if (!all_digits(ns) || !all_digits(ds)) return std::nullopt;
    Integer num{std::string(ns)};
    Integer den{std::string(ds)};
    if (sgn(den) == 0) return std::nullopt;
    if (negative) num = -num;
    return Rational(num, den);
  }

  auto dot = text.find('.');
  if (dot != std::string_view::npos) {
    std::string_view is = text.substr(0, dot), fs = text.substr(dot + 1);
    if (!fs.empty() && !all_digits(fs)) return std::nullopt;
    if (!is.empty() && !all_digits(is)) return std::nullopt;
    if (is.empty() && fs.empty()) return std::nullopt;
    Integer num(is.empty() ? std::string("0") : std::string(is));
    Integer den(1);
    for (char c : fs) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
    if (negative) num = -num;
    return Rational(num, den);
  }

  if (!all_digits(text)) return std::nullopt;
  Integer num{std::string(text)};
  if (negative) num = -num;
  return Rational(num, Integer(1));
}

Rational Rational::pow2(long k) {
  Integer big(1);
  mpz_mul_2exp(big.get_mpz_t(), big.get_mpz_t(), static_cast<mp_bitcnt_t>(k < 0 ? -k : k));
  return k >= 0 ? Rational(big, Integer(1)) : Rational(Integer(1), big);
}

std::string Rational::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

uint64_t Rational::residue(uint64_t prime) const {
  uint64_t d = mpz_fdiv_ui(q_.get_den().get_mpz_t(), prime);
  if (d == 0) throw non_invertible_weight("weight denominator not invertible mod prime");
  uint64_t n = mpz_fdiv_ui(q_.get_num().get_mpz_t(), prime);
  return modp::mul(n, modp::inv(d, prime), prime);
}

std::size_t Rational::hash() const {
  uint64_t hn = mpz_fdiv_ui(q_.get_num().get_mpz_t(), 0x1fffffffffffffffULL);
  uint64_t hd = mpz_fdiv_ui(q_.get_den().get_mpz_t(), 0xfffffffbULL);
  uint64_t h = hn * 0x9e3779b97f4a7c15ULL ^ (hd + (sgn(q_) < 0 ? 0x517cc1b727220a95ULL : 0));
  return static_cast<std::size_t>(h ^ (h >> 29));
}

}  // namespace pcirc
