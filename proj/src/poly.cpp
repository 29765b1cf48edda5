#include "pcirc/poly.hpp"

#include <algorithm>

#include "pcirc/errors.hpp"

namespace pcirc {

Monomial Monomial::var(VarRef ref, int exp) {
  Monomial m;
  if (exp < 0 || exp > 255) throw error("monomial exponent out of range");
  if (exp == 0) return m;
  m.exp_.assign(slot(ref) + 1, 0);
  m.exp_[slot(ref)] = static_cast<uint8_t>(exp);
  return m;
}

Monomial Monomial::from_masks(uint64_t plain_mask, uint64_t bar_mask) {
  Monomial m;
  for (int i = 1; i <= 64; ++i) {
    uint64_t bit = uint64_t{1} << (i - 1);
    if (plain_mask & bit) m = m * var(plain_var(i));
    if (bar_mask & bit) m = m * var(bar_var(i));
  }
  return m;
}

int Monomial::exponent(VarRef ref) const {
  std::size_t s = slot(ref);
  return s < exp_.size() ? exp_[s] : 0;
}

long Monomial::total_degree() const {
  long d = 0;
  for (uint8_t e : exp_) d += e;
  return d;
}

bool Monomial::is_multilinear() const {
  return std::all_of(exp_.begin(), exp_.end(), [](uint8_t e) { return e <= 1; });
}

void Monomial::trim() {
  while (!exp_.empty() && exp_.back() == 0) exp_.pop_back();
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.exp_.resize(std::max(exp_.size(), other.exp_.size()), 0);
  for (std::size_t i = 0; i < out.exp_.size(); ++i) {
    int a = i < exp_.size() ? exp_[i] : 0;
    int b = i < other.exp_.size() ? other.exp_[i] : 0;
    if (a + b > 255) throw error("monomial exponent overflow");
    out.exp_[i] = static_cast<uint8_t>(a + b);
  }
  out.trim();
  return out;
}

std::string Monomial::str() const {
  std::string s;
  for (std::size_t i = 0; i < exp_.size(); ++i) {
    if (exp_[i] == 0) continue;
    if (!s.empty()) s += "*";
    if (i % 2 == 1) s += "~";
    s += "x" + std::to_string(i / 2 + 1);
    if (exp_[i] > 1) s += "^" + std::to_string(exp_[i]);
  }
  return s.empty() ? "1" : s;
}

/* --- SparsePoly --------------------------------------------------------- */

SparsePoly SparsePoly::constant(int n, Rational c) {
  SparsePoly p(n);
  p.add_term(Monomial::one(), c);
  return p;
}

SparsePoly SparsePoly::variable(int n, VarRef ref) {
  SparsePoly p(n);
  p.add_term(Monomial::var(ref), Rational(1));
  return p;
}

Rational SparsePoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void SparsePoly::add_term(const Monomial& m, const Rational& coef) {
  if (coef.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void SparsePoly::add_scaled(const SparsePoly& other, const Rational& scale) {
  if (scale.is_zero()) return;
  for (const auto& [m, c] : other.terms_) add_term(m, c * scale);
}

SparsePoly SparsePoly::mul(const SparsePoly& other, std::size_t term_cap,
                           bool multilinear_only) const {
  SparsePoly out(std::max(n_, other.n_));
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : other.terms_) {
      Monomial m = ma * mb;
      if (multilinear_only && !m.is_multilinear()) continue;
      out.add_term(m, ca * cb);
      if (term_cap && out.terms_.size() > term_cap) throw term_blowup_error(term_cap);
    }
  }
  return out;
}

Rational SparsePoly::evaluate(const EvalPoint& point) const {
  Rational acc;
  int n = static_cast<int>(point.plain.size());
  for (const auto& [m, c] : terms_) {
    Rational term = c;
    for (int i = 1; i <= n; ++i) {
      for (int rep = m.exponent(plain_var(i)); rep > 0; --rep) term *= point.plain[i - 1];
      for (int rep = m.exponent(bar_var(i)); rep > 0; --rep) term *= point.bar[i - 1];
    }
    acc += term;
  }
  return acc;
}

long SparsePoly::degree() const {
  long d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
  return d;
}

int SparsePoly::max_exponent() const {
  int e = 0;
  for (const auto& [m, c] : terms_)
    for (int i = 1; i <= n_; ++i) {
      e = std::max(e, m.exponent(plain_var(i)));
      e = std::max(e, m.exponent(bar_var(i)));
    }
  return e;
}

std::string SparsePoly::str() const {
  if (terms_.empty()) return "0\n";
  std::string out;
  for (const auto& [m, c] : terms_) {
    out += c.str();
    out += " ";
    out += m.str();
    out += "\n";
  }
  return out;
}

/* --- DistTable ----------------------------------------------------------- */

DistTable DistTable::point_mass(int n, uint64_t mask) {
  DistTable d;
  d.n = n;
  d.mass.assign(std::size_t{1} << n, Rational(0));
  d.mass[mask] = Rational(1);
  return d;
}

DistTable::Validity DistTable::validate() const {
  Validity v;
  for (std::size_t s = 0; s < mass.size(); ++s) {
    if (mass[s].sign() < 0 && !v.negative_witness) {
      v.proper = false;
      v.negative_witness = s;
    }
    v.total += mass[s];
  }
  if (!(v.total == Rational(1))) v.proper = false;
  return v;
}

}  // namespace pcirc
