#include "pcirc/inference.hpp"

#include <sstream>

#include "pcirc/errors.hpp"
#include "pcirc/leaf_transforms.hpp"

namespace pcirc {

std::size_t Query::assigned_one_count() const {
  std::size_t k = 0;
  for (VarState s : states) k += s == VarState::one;
  return k;
}

std::size_t Query::marg_count() const {
  std::size_t k = 0;
  for (VarState s : states) k += s == VarState::marg;
  return k;
}

std::optional<Query> Query::parse(const std::string& text) {
  Query q;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    if (token == "1")
      q.states.push_back(VarState::one);
    else if (token == "0")
      q.states.push_back(VarState::zero);
    else if (token == "?")
      q.states.push_back(VarState::marg);
    else
      return std::nullopt;
  }
  return q;
}

std::string Query::str() const {
  std::string s;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i) s += " ";
    s += states[i] == VarState::one ? "1" : states[i] == VarState::zero ? "0" : "?";
  }
  return s;
}

namespace {

void check_query(const Circuit& c, const Query& q, Semantics kind, const char* op) {
  if (c.semantics().kind != kind)
    throw semantics_mismatch(std::string(op) + " expects semantics " +
                             semantics_name({kind, 0}) + ", got " +
                             semantics_name(c.semantics()));
  if (c.has_divisions())
    throw semantics_mismatch(std::string(op) + " expects a division-free circuit");
  if (q.states.size() != static_cast<std::size_t>(c.var_count()))
    throw error("query has " + std::to_string(q.states.size()) + " states for " +
                std::to_string(c.var_count()) + " variables");
}

}  // namespace

Rational marginal_network(const Circuit& c, const Query& q) {
  check_query(c, q, Semantics::network, "marginal_network");
  const int n = c.var_count();
  EvalPoint p = EvalPoint::zeros(n);
  for (int i = 0; i < n; ++i) {
    switch (q.states[i]) {
      case VarState::one: p.plain[i] = Rational(1); p.bar[i] = Rational(0); break;
      case VarState::zero: p.plain[i] = Rational(0); p.bar[i] = Rational(1); break;
      case VarState::marg: p.plain[i] = Rational(1); p.bar[i] = Rational(1); break;
    }
  }
  return evaluate(c, p);
}

Rational marginal_likelihood(const Circuit& c, const Query& q) {
  check_query(c, q, Semantics::likelihood, "marginal_likelihood");
  const int n = c.var_count();
  // Per-variable input x_i/(x_i + bar x_i) and factor (x_i + bar x_i) at the
  // network point: One -> (1, 1), Zero -> (0, 1), Marg -> (1/2, 2).
  EvalPoint p = EvalPoint::zeros(n);
  for (int i = 0; i < n; ++i)
    p.plain[i] = q.states[i] == VarState::one    ? Rational(1)
                 : q.states[i] == VarState::zero ? Rational(0)
                                                 : Rational(1, 2);
  return evaluate(c, p) * Rational::pow2(static_cast<long>(q.marg_count()));
}

Rational marginal_generating(const Circuit& c, const Query& q) {
  check_query(c, q, Semantics::generating, "marginal_generating");
  const int n = c.var_count();
  const int m = static_cast<int>(q.assigned_one_count());
  // h(z) = c at x_i = z (One), 0 (Zero), 1 (Marg) has degree <= m, and the
  // queried marginal is its z^m coefficient.
  std::vector<Rational> h(m + 1);
  for (int z = 0; z <= m; ++z) {
    EvalPoint p = EvalPoint::zeros(n);
    for (int i = 0; i < n; ++i)
      p.plain[i] = q.states[i] == VarState::one    ? Rational(z)
                   : q.states[i] == VarState::zero ? Rational(0)
                                                   : Rational(1);
    h[z] = evaluate(c, p);
  }
  // Leading coefficient via the exact finite-difference form of Lagrange
  // interpolation on 0..m: sum_z (-1)^(m-z) h(z) / (z! (m-z)!).
  Rational lead;
  Integer z_fact(1);
  for (int z = 0; z <= m; ++z) {
    if (z > 0) z_fact *= z;
    Integer rest_fact(1);
    for (int k = 2; k <= m - z; ++k) rest_fact *= k;
    Rational term = h[z] / Rational(Integer(z_fact * rest_fact));
    if ((m - z) % 2)
      lead -= term;
    else
      lead += term;
  }
  return lead;
}

Rational marginal_fourier(const Circuit& c, const Query& q) {
  check_query(c, q, Semantics::fourier, "marginal_fourier");
  return marginal_generating(fourier_to_generating(c), q);
}

Rational marginal(const Circuit& c, const Query& q) {
  switch (c.semantics().kind) {
    case Semantics::network: return marginal_network(c, q);
    case Semantics::likelihood: return marginal_likelihood(c, q);
    case Semantics::generating: return marginal_generating(c, q);
    case Semantics::fourier: return marginal_fourier(c, q);
    default:
      throw semantics_mismatch("no marginal algorithm for semantics " +
                               semantics_name(c.semantics()));
  }
}

}  // namespace pcirc
