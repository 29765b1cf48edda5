#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pcirc/circuit.hpp"
#include "pcirc/rational.hpp"

namespace pcirc {

/// Exponent vector over the paired slots (x_i at 2(i-1), bar x_i at 2(i-1)+1).
/// Trailing zero exponents are trimmed, so keys are independent of n.
class Monomial {
 public:
  Monomial() = default;
  static Monomial one() { return {}; }
  static Monomial var(VarRef ref, int exp = 1);
  /// Multilinear monomial: x_i for i in plain_mask, bar x_i for i in bar_mask
  /// (masks use bit i-1 for variable i).
  static Monomial from_masks(uint64_t plain_mask, uint64_t bar_mask);

  int exponent(VarRef ref) const;
  long total_degree() const;
  bool is_multilinear() const;
  bool is_one() const { return exp_.empty(); }

  Monomial operator*(const Monomial& other) const;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exp_ == b.exp_; }
  friend bool operator<(const Monomial& a, const Monomial& b) { return a.exp_ < b.exp_; }

  std::string str() const;  // e.g. "x1^2*~x3", "1" for the empty monomial

 private:
  static std::size_t slot(VarRef ref) {
    return 2 * static_cast<std::size_t>(ref.index - 1) + (ref.pol == Polarity::bar ? 1 : 0);
  }
  void trim();
  std::vector<uint8_t> exp_;
};

/// Canonical sparse polynomial: monomial -> nonzero rational coefficient.
class SparsePoly {
 public:
  explicit SparsePoly(int n = 0) : n_(n) {}
  static SparsePoly constant(int n, Rational c);
  static SparsePoly variable(int n, VarRef ref);

  int var_count() const { return n_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  Rational coefficient(const Monomial& m) const;
  void add_term(const Monomial& m, const Rational& coef);
  void add_scaled(const SparsePoly& other, const Rational& scale);

  /// Product; throws term_blowup_error when the running term count exceeds
  /// `term_cap` (0 = unlimited). With `multilinear_only`, terms acquiring an
  /// exponent >= 2 are dropped as they appear (the multilinear part).
  SparsePoly mul(const SparsePoly& other, std::size_t term_cap = 0,
                 bool multilinear_only = false) const;

  Rational evaluate(const EvalPoint& point) const;

  long degree() const;
  int max_exponent() const;
  bool is_multilinear() const { return max_exponent() <= 1; }

  friend bool operator==(const SparsePoly& a, const SparsePoly& b) {
    return a.terms_ == b.terms_;
  }

  /// Canonical dump: one "coef monomial" line per term in key order; "0" when empty.
  std::string str() const;

 private:
  int n_;
  std::map<Monomial, Rational> terms_;
};

/// Explicit probability table: mass[mask] = Pr(assignment), bit i-1 <-> X_i = 1.
struct DistTable {
  int n = 0;
  std::vector<Rational> mass;  // size 1 << n

  static DistTable point_mass(int n, uint64_t mask);

  struct Validity {
    bool proper = true;
    std::optional<uint64_t> negative_witness;
    Rational total;
  };
  Validity validate() const;

  friend bool operator==(const DistTable& a, const DistTable& b) {
    return a.n == b.n && a.mass == b.mass;
  }
};

}  // namespace pcirc
