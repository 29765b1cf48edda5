#include "pcirc/oracle.hpp"

#include <algorithm>
#include <random>

#include "pcirc/errors.hpp"

namespace pcirc::oracle {

namespace {

SparsePoly expand_impl(const Circuit& c, std::size_t term_cap, bool multilinear_only) {
  if (c.has_divisions())
    throw division_not_allowed("expand requires a division-free circuit");
  const int n = c.var_count();
  std::vector<SparsePoly> value(c.nodes().size(), SparsePoly(n));
  for (NodeId id = 0; id < c.nodes().size(); ++id) {
    const Node& node = c.node(id);
    if (const auto* s = std::get_if<SumNode>(&node)) {
      SparsePoly acc(n);
      for (const auto& wc : s->children) acc.add_scaled(value[wc.child], wc.weight);
      if (term_cap && acc.term_count() > term_cap) throw term_blowup_error(term_cap);
      value[id] = std::move(acc);
    } else if (const auto* p = std::get_if<ProductNode>(&node)) {
      SparsePoly acc = SparsePoly::constant(n, Rational(1));
      for (NodeId ch : p->children) acc = acc.mul(value[ch], term_cap, multilinear_only);
      value[id] = std::move(acc);
    } else if (const auto* v = std::get_if<VarNode>(&node)) {
      value[id] = SparsePoly::variable(n, v->ref);
    } else {
      value[id] = SparsePoly::constant(n, std::get<ConstNode>(node).value);
    }
  }
  return value[c.root()];
}

uint64_t parity_sign_exponent(uint64_t a, uint64_t b) {
  return static_cast<uint64_t>(__builtin_popcountll(a & b));
}

void check_table_size(int n) {
  if (n < 0 || n > 20) throw error("distribution table too large (n=" + std::to_string(n) + ")");
}

}  // namespace

SparsePoly expand(const Circuit& c, std::size_t term_cap) {
  return expand_impl(c, term_cap, false);
}

SparsePoly expand_multilinear_part(const Circuit& c, std::size_t term_cap) {
  return expand_impl(c, term_cap, true);
}

std::vector<Rational> spectrum_of(const DistTable& d) {
  check_table_size(d.n);
  const std::size_t count = std::size_t{1} << d.n;
  const Rational scale = Rational::pow2(-d.n);
  std::vector<Rational> spectrum(count);
  for (uint64_t t = 0; t < count; ++t) {
    Rational acc;
    for (uint64_t s = 0; s < count; ++s) {
      if (parity_sign_exponent(s, t) & 1)
        acc -= d.mass[s];
      else
        acc += d.mass[s];
    }
    spectrum[t] = acc * scale;
  }
  return spectrum;
}

SparsePoly fourier_of(const DistTable& d) {
  check_table_size(d.n);
  const std::size_t count = std::size_t{1} << d.n;
  SparsePoly out(d.n);
  const Rational scale = Rational::pow2(-d.n);
  for (uint64_t s = 0; s < count; ++s) {
    if (d.mass[s].is_zero()) continue;
    // Pr(v_S) * prod_{i in S} (1 - 2 x_i), expanded factor by factor.
    SparsePoly term = SparsePoly::constant(d.n, d.mass[s] * scale);
    for (int i = 1; i <= d.n; ++i) {
      if (!(s >> (i - 1) & 1)) continue;
      SparsePoly factor = SparsePoly::constant(d.n, Rational(1));
      factor.add_term(Monomial::var(plain_var(i)), Rational(-2));
      term = term.mul(factor);
    }
    for (const auto& [m, coef] : term.terms()) out.add_term(m, coef);
  }
  return out;
}

SparsePoly tag_polynomial(const DistTable& d, const SemanticsTag& tag) {
  check_table_size(d.n);
  const std::size_t count = std::size_t{1} << d.n;
  const uint64_t all = count - 1;
  SparsePoly out(d.n);
  switch (tag.kind) {
    case Semantics::likelihood: {
      for (uint64_t s = 0; s < count; ++s) {
        if (d.mass[s].is_zero()) continue;
        SparsePoly term = SparsePoly::constant(d.n, d.mass[s]);
        for (int i = 1; i <= d.n; ++i) {
          SparsePoly factor(d.n);
          if (s >> (i - 1) & 1) {
            factor.add_term(Monomial::var(plain_var(i)), Rational(1));
          } else {
            factor.add_term(Monomial::one(), Rational(1));
            factor.add_term(Monomial::var(plain_var(i)), Rational(-1));
          }
          term = term.mul(factor);
        }
        for (const auto& [m, coef] : term.terms()) out.add_term(m, coef);
      }
      return out;
    }
    case Semantics::network: {
      for (uint64_t s = 0; s < count; ++s)
        out.add_term(Monomial::from_masks(s, all & ~s), d.mass[s]);
      return out;
    }
    case Semantics::generating: {
      for (uint64_t s = 0; s < count; ++s) out.add_term(Monomial::from_masks(s, 0), d.mass[s]);
      return out;
    }
    case Semantics::likelihood_pm: {
      auto spec = spectrum_of(d);
      for (uint64_t s = 0; s < count; ++s) out.add_term(Monomial::from_masks(s, 0), spec[s]);
      return out;
    }
    case Semantics::fourier:
      return fourier_of(d);
    case Semantics::fourier_ind: {
      auto spec = spectrum_of(d);
      for (uint64_t s = 0; s < count; ++s)
        out.add_term(Monomial::from_masks(s, all & ~s), spec[s]);
      return out;
    }
    default:
      throw semantics_mismatch("no defining polynomial for semantics " + semantics_name(tag));
  }
}

/* --- distribution extraction ---------------------------------------------- */

namespace {

EvalPoint indicator_point(int n, uint64_t mask) {
  EvalPoint p = EvalPoint::zeros(n);
  for (int i = 1; i <= n; ++i) {
    bool on = mask >> (i - 1) & 1;
    p.plain[i - 1] = Rational(on ? 1 : 0);
    p.bar[i - 1] = Rational(on ? 0 : 1);
  }
  return p;
}

DistTable invert_spectrum(int n, const std::vector<Rational>& spectrum) {
  DistTable d;
  d.n = n;
  const std::size_t count = std::size_t{1} << n;
  d.mass.assign(count, Rational(0));
  for (uint64_t t = 0; t < count; ++t) {
    Rational acc;
    for (uint64_t s = 0; s < count; ++s) {
      if (parity_sign_exponent(s, t) & 1)
        acc -= spectrum[s];
      else
        acc += spectrum[s];
    }
    d.mass[t] = acc;
  }
  return d;
}

}  // namespace

DistTable extract_table(const Circuit& c) {
  const SemanticsTag& tag = c.semantics();
  if (!tag.distribution_tag())
    throw semantics_mismatch("cannot extract a distribution from semantics " +
                             semantics_name(tag));
  check_table_size(c.var_count());
  const int n = c.var_count();
  const std::size_t count = std::size_t{1} << n;
  const uint64_t all = count - 1;
  DistTable d;
  d.n = n;
  d.mass.assign(count, Rational(0));

  switch (tag.kind) {
    case Semantics::likelihood: {
      for (uint64_t t = 0; t < count; ++t) d.mass[t] = evaluate(c, indicator_point(n, t));
      return d;
    }
    case Semantics::network: {
      for (uint64_t t = 0; t < count; ++t) d.mass[t] = evaluate(c, indicator_point(n, t));
      return d;
    }
    case Semantics::likelihood_pm: {
      for (uint64_t t = 0; t < count; ++t) {
        EvalPoint p = EvalPoint::zeros(n);
        for (int i = 1; i <= n; ++i) p.plain[i - 1] = Rational(t >> (i - 1) & 1 ? -1 : 1);
        d.mass[t] = evaluate(c, p);
      }
      return d;
    }
    case Semantics::generating: {
      SparsePoly g = expand(c);
      for (const auto& [m, coef] : g.terms()) {
        if (!m.is_multilinear())
          throw semantics_mismatch("generating-tagged circuit is not multilinear");
      }
      for (uint64_t s = 0; s < count; ++s) d.mass[s] = g.coefficient(Monomial::from_masks(s, 0));
      if (g.term_count() >
          static_cast<std::size_t>(std::count_if(d.mass.begin(), d.mass.end(),
                                                 [](const Rational& r) { return !r.is_zero(); })))
        throw semantics_mismatch("generating-tagged circuit has monomials outside {0,1}^n");
      return d;
    }
    case Semantics::fourier: {
      std::vector<Rational> spectrum(count);
      for (uint64_t s = 0; s < count; ++s) spectrum[s] = evaluate(c, indicator_point(n, s));
      return invert_spectrum(n, spectrum);
    }
    case Semantics::fourier_ind: {
      SparsePoly f = expand(c);
      std::vector<Rational> spectrum(count);
      std::size_t seen = 0;
      for (uint64_t s = 0; s < count; ++s) {
        Rational coef = f.coefficient(Monomial::from_masks(s, all & ~s));
        if (!coef.is_zero()) ++seen;
        spectrum[s] = coef;
      }
      if (seen != f.term_count())
        throw semantics_mismatch(
            "fourier_ind-tagged circuit has monomials outside the indicator form");
      return invert_spectrum(n, spectrum);
    }
    default:
      throw semantics_mismatch("unreachable");
  }
}

DistTable dist_from(const Circuit& c) {
  DistTable d = extract_table(c);
  auto v = d.validate();
  if (!v.proper) {
    if (v.negative_witness)
      throw not_a_distribution("negative mass at assignment mask " +
                                   std::to_string(*v.negative_witness),
                               v.negative_witness);
    throw not_a_distribution("mass sums to " + v.total.str() + ", expected 1", std::nullopt);
  }
  return d;
}

/* --- flat circuits ---------------------------------------------------------- */

namespace {

NodeId build_sum_tree(CircuitBuilder& b, std::vector<WeightedChild> terms,
                      TermGrouping grouping) {
  if (grouping == TermGrouping::flat) return b.sum(std::move(terms));
  while (terms.size() > 1) {
    std::vector<WeightedChild> next;
    next.reserve(terms.size() / 2 + 1);
    for (std::size_t i = 0; i + 1 < terms.size(); i += 2) {
      NodeId pair = b.sum({terms[i], terms[i + 1]});
      next.push_back({Rational(1), pair});
    }
    if (terms.size() % 2) next.push_back(terms.back());
    terms = std::move(next);
  }
  return b.sum({terms[0]});
}

}  // namespace

Circuit poly_to_circuit(const SparsePoly& p, int n, const SemanticsTag& tag,
                        TermGrouping grouping) {
  CircuitBuilder b;
  if (p.is_zero()) return b.finish(b.constant(Rational(0)), n, tag);
  std::vector<WeightedChild> terms;
  for (const auto& [m, coef] : p.terms()) {
    std::vector<NodeId> factors;
    for (int i = 1; i <= n; ++i) {
      for (int rep = m.exponent(plain_var(i)); rep > 0; --rep)
        factors.push_back(b.var(plain_var(i)));
      for (int rep = m.exponent(bar_var(i)); rep > 0; --rep)
        factors.push_back(b.var(bar_var(i)));
    }
    NodeId body =
        factors.empty() ? b.constant(Rational(1)) : b.product(std::move(factors));
    terms.push_back({coef, body});
  }
  return b.finish(build_sum_tree(b, std::move(terms), grouping), n, tag);
}

Circuit encode(const DistTable& d, const SemanticsTag& tag, TermGrouping grouping) {
  return poly_to_circuit(tag_polynomial(d, tag), d.n, tag, grouping);
}

/* --- identity testing -------------------------------------------------------- */

IdentityResult identical(const Circuit& a, const Circuit& b, const ExactMode& mode) {
  SparsePoly pa = expand(a, mode.term_cap);
  SparsePoly pb = expand(b, mode.term_cap);
  IdentityResult r;
  r.equal = pa == pb;
  if (!r.equal) {
    for (const auto& [m, coef] : pa.terms())
      if (!(pb.coefficient(m) == coef)) {
        r.differing_monomial = m;
        return r;
      }
    for (const auto& [m, coef] : pb.terms())
      if (!(pa.coefficient(m) == coef)) {
        r.differing_monomial = m;
        return r;
      }
  }
  return r;
}

IdentityResult identical(const Circuit& a, const Circuit& b, const ProbabilisticMode& mode) {
  if (a.has_divisions() || b.has_divisions())
    throw division_not_allowed("identity testing requires division-free circuits");
  const int n = std::max(a.var_count(), b.var_count());
  std::mt19937_64 rng(mode.seed);
  auto draw = [&]() {
    // uniform in [0, prime): 61-bit draws with rejection
    for (;;) {
      uint64_t v = rng() >> 3;
      if (v < mode.prime) return v;
    }
  };
  IdentityResult r;
  r.equal = true;
  for (int t = 0; t < mode.trials; ++t) {
    ModPoint point;
    point.plain.resize(n);
    point.bar.resize(n);
    for (int i = 0; i < n; ++i) {
      point.plain[i] = draw();
      point.bar[i] = draw();
    }
    if (evaluate_mod(a, point, mode.prime) != evaluate_mod(b, point, mode.prime)) {
      r.equal = false;
      r.counterexample = point;
      return r;
    }
  }
  return r;
}

/* --- permanent ----------------------------------------------------------------- */

namespace {

Integer permanent_enumerate(const IntMatrix& m) {
  // Row-by-row walk in lexicographic column order.
  const int n = m.order;
  Integer total(0);
  uint32_t used = 0;
  auto rec = [&](auto&& self, int row) -> void {
    if (row == n) {
      total += 1;
      return;
    }
    for (int col = 0; col < n; ++col) {
      if (used >> col & 1) continue;
      if (!m.at(row, col)) continue;
      used |= uint32_t{1} << col;
      self(self, row + 1);
      used &= ~(uint32_t{1} << col);
    }
  };
  rec(rec, 0);
  return total;
}

Integer permanent_ryser(const IntMatrix& m) {
  // Gray-code subset iteration over column sets.
  const int n = m.order;
  std::vector<int64_t> row_sum(n, 0);
  __int128 total = 0;
  uint64_t gray = 0;
  for (uint64_t k = 1; k < (uint64_t{1} << n); ++k) {
    uint64_t next = k ^ (k >> 1);
    uint64_t flipped = gray ^ next;
    int col = __builtin_ctzll(flipped);
    int delta = (next >> col & 1) ? 1 : -1;
    for (int i = 0; i < n; ++i) row_sum[i] += delta * m.at(i, col);
    gray = next;
    __int128 prod = 1;
    for (int i = 0; i < n && prod != 0; ++i) prod *= row_sum[i];
    int bits = __builtin_popcountll(next);
    if ((n - bits) & 1)
      total -= prod;
    else
      total += prod;
  }
  bool negative = total < 0;
  unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-total)
                                   : static_cast<unsigned __int128>(total);
  Integer out(static_cast<unsigned long>(mag >> 64));
  out <<= 64;
  out += static_cast<unsigned long>(mag & ~uint64_t{0});
  if (negative) out = -out;
  return out;
}

}  // namespace

Integer permanent(const IntMatrix& m) {
  if (m.order < 0 || m.order > 20) throw error("permanent oracle supports order <= 20");
  if (m.order == 0) return Integer(1);
  for (uint8_t e : m.entries)
    if (e > 1) throw error("permanent oracle expects a 0/1 matrix");
  if (m.order <= 12) return permanent_enumerate(m);
  return permanent_ryser(m);
}

}  // namespace pcirc::oracle
