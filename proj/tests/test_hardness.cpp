#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "pcirc/errors.hpp"
#include "pcirc/hardness.hpp"
#include "pcirc/oracle.hpp"
#include "support/gen.hpp"

using namespace pcirc;
namespace orc = pcirc::oracle;

namespace {

IntMatrix random_matrix(testgen::Rng& rng, int order, int percent_ones) {
  IntMatrix m = IntMatrix::zero(order);
  for (auto& e : m.entries) e = rng.chance(percent_ones) ? 1 : 0;
  return m;
}

IntMatrix single_hot_column(int order, int col) {
  IntMatrix m = IntMatrix::zero(order);
  for (int i = 0; i < order; ++i) m.at(i, col) = 1;
  return m;
}

}  // namespace

TEST_CASE("sparsify: already sparse input is untouched") {
  IntMatrix id = IntMatrix::identity(5);
  auto [out, trace] = sparsify(id);
  CHECK(out == id);
  CHECK(trace.empty());
}

TEST_CASE("sparsify: a dense column loses one entry per step") {
  // a 4x4 whose second column is all ones
  IntMatrix m = single_hot_column(4, 1);
  auto [out, trace] = sparsify(m);
  REQUIRE(trace.size() == 1);
  CHECK(trace[0].column == 1);
  CHECK(trace[0].row_a == 0);
  CHECK(trace[0].row_b == 1);
  CHECK(out.order == 5);
  CHECK(out.column_count(1) == 3);  // decreased by one
  CHECK(out.column_count(4) == 3);  // the new column holds exactly three
  CHECK(orc::permanent(out) == Integer(0));
  CHECK(orc::permanent(m) == Integer(0));
  // moved entries land in the new column, diagonal set, new row points back
  CHECK(out.at(0, 4) == 1);
  CHECK(out.at(1, 4) == 1);
  CHECK(out.at(4, 4) == 1);
  CHECK(out.at(4, 1) == 1);
  CHECK(out.at(0, 1) == 0);
  CHECK(out.at(1, 1) == 0);
}

TEST_CASE("sparsify preserves the permanent on random matrices") {
  testgen::Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    int order = rng.range(2, 6);
    IntMatrix m = random_matrix(rng, order, 60);
    auto [out, trace] = sparsify(m);
    for (int col = 0; col < out.order; ++col) CHECK(out.column_count(col) <= 3);
    CHECK(out.order <= order + order * order);
    CHECK(out.order == order + static_cast<int>(trace.size()));
    if (out.order <= 20) CHECK(orc::permanent(out) == orc::permanent(m));
    CHECK(replay_trace(m, trace) == out);
  }
}

TEST_CASE("one sparsify step preserves the contributing-permutation count") {
  testgen::Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    IntMatrix m = random_matrix(rng, rng.range(4, 6), 70);
    auto [out, trace] = sparsify(m);
    if (trace.empty()) continue;
    IntMatrix first = replay_trace(m, SparsifyTrace{trace.begin(), trace.begin() + 1});
    // 0/1 entries: the permanent counts contributing permutations on each side
    CHECK(orc::permanent(first) == orc::permanent(m));
  }
}

TEST_CASE("valiant_circuit: identity and all-ones") {
  Circuit id2 = valiant_circuit(IntMatrix::identity(2));
  CHECK(id2.semantics().kind == Semantics::categorical_generating);
  CHECK(id2.semantics().categories == 4);
  CHECK(coefficient_of_all_ones(id2) == Rational(1));

  IntMatrix ones2 = IntMatrix::zero(2);
  for (auto& e : ones2.entries) e = 1;
  Circuit c = valiant_circuit(ones2);
  CHECK(coefficient_of_all_ones(c) == Rational(2));
  // (x1 + x2)^2 expands with the square terms present
  SparsePoly p = orc::expand(c);
  CHECK(p.coefficient(Monomial::var(plain_var(1), 2)) == Rational(1));

  IntMatrix ones3 = IntMatrix::zero(3);
  for (auto& e : ones3.entries) e = 1;
  CHECK(coefficient_of_all_ones(valiant_circuit(ones3)) == Rational(6));
}

TEST_CASE("valiant_circuit rejects dense columns") {
  CHECK_THROWS_AS(valiant_circuit(single_hot_column(4, 1)), degree_violation);
}

TEST_CASE("valiant_circuit per-variable degree respects k-1") {
  testgen::Rng rng(13);
  for (int t = 0; t < 6; ++t) {
    IntMatrix m = sparsify(random_matrix(rng, rng.range(2, 5), 70)).matrix;
    Circuit c = valiant_circuit(m);
    SparsePoly p = orc::expand(c);
    CHECK(p.max_exponent() <= 3);
    for (int i = 1; i <= m.order; ++i)
      CHECK(var_degree_bound(c, i) == m.column_count(i - 1));
  }
}

TEST_CASE("end-to-end: the all-ones coefficient is the permanent") {
  testgen::Rng rng(17);
  // the sparsified circuit of the dense-column example has permanent 0
  CHECK(coefficient_of_all_ones(valiant_circuit(sparsify(single_hot_column(4, 1)).matrix)) ==
        Rational(0));
  for (int t = 0; t < 10; ++t) {
    int order = rng.range(2, 5);
    IntMatrix m = random_matrix(rng, order, 55);
    auto [sparse, trace] = sparsify(m);
    CHECK(coefficient_of_all_ones(valiant_circuit(sparse)) ==
          Rational(orc::permanent(m)));
  }
}
