#pragma once

// Deterministic generators shared by the test suites. The raw mt19937_64
// stream is reduced by rejection so sequences are identical across standard
// libraries (std::uniform_int_distribution is not portable).

#include <random>
#include <vector>

#include "pcirc/circuit.hpp"
#include "pcirc/poly.hpp"

namespace pcirc::testgen {

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(uint64_t seed) : engine(seed) {}

  uint64_t below(uint64_t m) {
    uint64_t limit = UINT64_MAX - UINT64_MAX % m;
    for (;;) {
      uint64_t v = engine();
      if (v < limit) return v % m;
    }
  }
  int range(int lo, int hi) { return lo + static_cast<int>(below(hi - lo + 1)); }
  bool chance(int percent) { return range(1, 100) <= percent; }
  Rational small_rational(bool allow_negative = true) {
    long num = range(allow_negative ? -9 : 0, 9);
    return Rational(num, static_cast<long>(range(1, 4)));
  }
};

/// Random proper distribution: small nonnegative integer weights normalized.
inline DistTable random_table(Rng& rng, int n) {
  DistTable d;
  d.n = n;
  const std::size_t count = std::size_t{1} << n;
  std::vector<long> raw(count);
  long total = 0;
  for (auto& w : raw) {
    w = rng.range(0, 9);
    total += w;
  }
  if (total == 0) {
    raw[rng.below(count)] = 1;
    total = 1;
  }
  d.mass.reserve(count);
  for (long w : raw) d.mass.push_back(Rational(w, total));
  return d;
}

/// Random decomposable single-polarity circuit over variables [1..n]:
/// products split the variable set, sums mix subcircuits over the same set
/// (possibly with constant children, which leave scope gaps).
inline Circuit random_decomposable(Rng& rng, int n, SemanticsTag tag, int depth,
                                   bool allow_const_children = true) {
  CircuitBuilder b;
  auto rec = [&](auto&& self, std::vector<int> vars, int d) -> NodeId {
    if (vars.size() == 1) {
      NodeId x = b.var(plain_var(vars[0]));
      if (d <= 0 || rng.chance(30)) return x;
      return b.sum({{rng.small_rational(), x},
                    {rng.small_rational(), b.constant(Rational(1))}});
    }
    if (d <= 0 || rng.chance(40)) {
      // product over a partition
      std::vector<int> left, right;
      for (std::size_t i = 0; i < vars.size(); ++i)
        (i == 0 ? left : i == 1 ? right : (rng.chance(50) ? left : right)).push_back(vars[i]);
      return b.product({self(self, left, d - 1), self(self, right, d - 1)});
    }
    std::vector<WeightedChild> children;
    int k = rng.range(2, 3);
    for (int j = 0; j < k; ++j)
      children.push_back({rng.small_rational(), self(self, vars, d - 1)});
    if (allow_const_children && rng.chance(25))
      children.push_back({rng.small_rational(), b.constant(Rational(1))});
    return b.sum(std::move(children));
  };
  std::vector<int> vars(n);
  for (int i = 0; i < n; ++i) vars[i] = i + 1;
  return b.finish(rec(rec, vars, depth), n, tag);
}

/// Decomposable circuit of at least `min_size` builder nodes: a weighted sum
/// of independently generated components over the same variables.
inline Circuit sized_decomposable(Rng& rng, int n, SemanticsTag tag, std::size_t min_size) {
  CircuitBuilder b;
  std::vector<WeightedChild> parts;
  while (b.node_count() < min_size) {
    Circuit comp = random_decomposable(rng, n, tag_raw(), 4);
    Rebuilder rb(comp, b);
    parts.push_back({rng.small_rational(), rb.copy(comp.root())});
  }
  return b.finish(b.sum(std::move(parts)), n, tag);
}

/// Mixture of products of univariate affines: a proper distribution encoded as
/// a likelihood or generating circuit; decomposable, sums smooth up to scoped
/// constants.
inline Circuit bernoulli_mixture(Rng& rng, int n, SemanticsTag tag, int components) {
  CircuitBuilder b;
  NodeId one = b.constant(Rational(1));
  std::vector<WeightedChild> mix;
  std::vector<long> mix_raw(components);
  long mix_total = 0;
  for (auto& w : mix_raw) {
    w = rng.range(1, 9);
    mix_total += w;
  }
  for (int c = 0; c < components; ++c) {
    std::vector<NodeId> factors;
    for (int i = 1; i <= n; ++i) {
      long num = rng.range(0, 8);
      Rational p(num, 8);
      if (tag.kind == Semantics::likelihood) {
        // p x + (1-p)(1-x) = (2p-1) x + (1-p)
        factors.push_back(b.sum({{p * Rational(2) - Rational(1), b.var(plain_var(i))},
                                 {Rational(1) - p, one}}));
      } else {
        // generating: (1-p) + p x
        factors.push_back(
            b.sum({{p, b.var(plain_var(i))}, {Rational(1) - p, one}}));
      }
    }
    mix.push_back({Rational(mix_raw[c], mix_total),
                   factors.size() == 1 ? factors[0] : b.product(std::move(factors))});
  }
  return b.finish(b.sum(std::move(mix)), n, tag);
}

/// Two-variable demo distribution used across the suites:
/// masses 9/100, 25/100, 21/100, 45/100; likelihood polynomial
/// (2/25) x1 x2 + (4/25) x1 + (3/25) x2 + 9/100.
inline DistTable demo2_table() {
  DistTable d;
  d.n = 2;
  d.mass = {Rational(9, 100), Rational(25, 100), Rational(21, 100), Rational(45, 100)};
  return d;
}

/// The demo distribution as a mixture of two product Bernoullis; decomposable,
/// with constant children under singleton-scope sums.
inline Circuit demo2_likelihood() {
  CircuitBuilder b;
  NodeId x1 = b.var(plain_var(1)), x2 = b.var(plain_var(2)), one = b.constant(Rational(1));
  NodeId a1 = b.sum({{Rational(3, 5), x1}, {Rational(1, 5), one}});
  NodeId a2 = b.sum({{Rational(2, 25), x2}, {Rational(23, 50), one}});
  NodeId b1 = b.sum({{Rational(1, 5), x1}, {Rational(2, 5), one}});
  NodeId b2 = b.sum({{Rational(14, 25), x2}, {Rational(11, 50), one}});
  NodeId root = b.sum({{Rational(1, 2), b.product({a1, a2})},
                       {Rational(1, 2), b.product({b1, b2})}});
  return b.finish(root, 2, tag_likelihood());
}

}  // namespace pcirc::testgen
