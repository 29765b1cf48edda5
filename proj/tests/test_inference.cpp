#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "pcirc/errors.hpp"
#include "pcirc/inference.hpp"
#include "pcirc/leaf_transforms.hpp"
#include "pcirc/oracle.hpp"
#include "support/gen.hpp"

using namespace pcirc;
namespace orc = pcirc::oracle;

namespace {

Rational table_marginal(const DistTable& d, const Query& q) {
  Rational acc;
  for (uint64_t s = 0; s < (uint64_t{1} << d.n); ++s) {
    bool match = true;
    for (int i = 0; i < d.n && match; ++i) {
      bool on = s >> i & 1;
      if (q.states[i] == VarState::one && !on) match = false;
      if (q.states[i] == VarState::zero && on) match = false;
    }
    if (match) acc += d.mass[s];
  }
  return acc;
}

Query q_of(const std::string& text) { return *Query::parse(text); }

}  // namespace

TEST_CASE("query parsing and printing") {
  Query q = q_of("1 ? 0");
  CHECK(q.states.size() == 3);
  CHECK(q.str() == "1 ? 0");
  CHECK(q.assigned_one_count() == 1);
  CHECK(q.marg_count() == 1);
  CHECK(!Query::parse("1 x"));
  CHECK(Query::parse("")->states.empty());
}

TEST_CASE("demo marginals across all four semantics") {
  DistTable d = testgen::demo2_table();
  Circuit like = testgen::demo2_likelihood();
  Circuit net = orc::encode(d, tag_network());
  Circuit gen = orc::encode(d, tag_generating());
  Circuit fourier = orc::encode(d, tag_fourier());

  Query one_marg = q_of("1 ?");
  CHECK(marginal_likelihood(like, one_marg) == Rational(7, 10));
  CHECK(marginal_network(net, one_marg) == Rational(7, 10));
  CHECK(marginal_generating(gen, one_marg) == Rational(7, 10));
  CHECK(marginal_fourier(fourier, one_marg) == Rational(7, 10));

  CHECK(marginal_likelihood(like, q_of("0 0")) == Rational(9, 100));
  CHECK(marginal_network(net, q_of("1 0")) == Rational(25, 100));
  CHECK(marginal_generating(gen, q_of("? 0")) == Rational(34, 100));
  CHECK(marginal_likelihood(like, q_of("? ?")) == Rational(1));
  CHECK(marginal_fourier(fourier, q_of("? ?")) == Rational(1));
}

TEST_CASE("point mass and uniform corner cases") {
  CircuitBuilder b;
  Circuit g = b.finish(b.product({b.var(plain_var(1)), b.var(plain_var(2))}), 2,
                       tag_generating());
  CHECK(marginal_generating(g, q_of("1 1")) == Rational(1));
  CHECK(marginal_generating(g, q_of("0 ?")) == Rational(0));

  // uniform over one variable: the fourier polynomial is (1 - x1)/2
  CircuitBuilder b2;
  Circuit uniform_fourier = b2.finish(
      b2.sum({{Rational(1, 2), b2.constant(Rational(1))}, {Rational(-1, 2), b2.var(plain_var(1))}}),
      1, tag_fourier());
  CHECK(marginal_fourier(uniform_fourier, q_of("1")) == Rational(1, 2));
  CHECK(marginal_fourier(uniform_fourier, q_of("?")) == Rational(1));

  // a constant 1/2 fourier circuit is the point mass on the empty assignment
  CircuitBuilder b3;
  Circuit point_fourier = b3.finish(b3.constant(Rational(1, 2)), 1, tag_fourier());
  CHECK(marginal_fourier(point_fourier, q_of("1")) == Rational(0));
  CHECK(marginal_fourier(point_fourier, q_of("0")) == Rational(1));
}

TEST_CASE("semantics are enforced") {
  Circuit like = testgen::demo2_likelihood();
  CHECK_THROWS_AS(marginal_network(like, q_of("1 ?")), semantics_mismatch);
  CHECK_THROWS_AS(marginal_likelihood(like, q_of("1")), error);  // wrong arity
  Circuit pm = orc::encode(testgen::demo2_table(), tag_likelihood_pm());
  CHECK_THROWS_AS(marginal(pm, q_of("1 ?")), semantics_mismatch);
}

TEST_CASE("four-way agreement with brute-force table sums") {
  testgen::Rng rng(43);
  for (int trial = 0; trial < 6; ++trial) {
    int n = rng.range(1, 4);
    DistTable d = testgen::random_table(rng, n);
    Circuit like = orc::encode(d, tag_likelihood());
    Circuit net = orc::encode(d, tag_network());
    Circuit gen = orc::encode(d, tag_generating());
    Circuit fourier = orc::encode(d, tag_fourier());
    // all 3^n queries
    std::vector<VarState> states(n, VarState::zero);
    long total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    for (long code = 0; code < total; ++code) {
      long rest = code;
      for (int i = 0; i < n; ++i) {
        int digit = rest % 3;
        rest /= 3;
        states[i] = digit == 0 ? VarState::zero : digit == 1 ? VarState::one : VarState::marg;
      }
      Query q{states};
      Rational want = table_marginal(d, q);
      CHECK(marginal_network(net, q) == want);
      CHECK(marginal_likelihood(like, q) == want);
      CHECK(marginal_generating(gen, q) == want);
      CHECK(marginal_fourier(fourier, q) == want);
    }
  }
}

TEST_CASE("relaxing one variable adds the two refinements") {
  testgen::Rng rng(47);
  DistTable d = testgen::random_table(rng, 4);
  Circuit gen = orc::encode(d, tag_generating());
  Query base = q_of("1 ? 0 1");
  for (int i = 0; i < 4; ++i) {
    Query relaxed = base, at_one = base, at_zero = base;
    relaxed.states[i] = VarState::marg;
    at_one.states[i] = VarState::one;
    at_zero.states[i] = VarState::zero;
    CHECK(marginal_generating(gen, relaxed) ==
          marginal_generating(gen, at_one) + marginal_generating(gen, at_zero));
  }
}

TEST_CASE("fully assigned queries equal the mass table") {
  testgen::Rng rng(53);
  int n = 3;
  DistTable d = testgen::random_table(rng, n);
  Circuit like = orc::encode(d, tag_likelihood());
  for (uint64_t s = 0; s < (uint64_t{1} << n); ++s) {
    std::vector<VarState> states(n);
    for (int i = 0; i < n; ++i) states[i] = (s >> i & 1) ? VarState::one : VarState::zero;
    CHECK(marginal_likelihood(like, Query{states}) == d.mass[s]);
  }
}
