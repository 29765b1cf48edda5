#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "pcirc/circuit.hpp"
#include "pcirc/errors.hpp"
#include "support/gen.hpp"

using namespace pcirc;

TEST_CASE("n=0 constant circuit is legal and evaluates") {
  CircuitBuilder b;
  Circuit c = b.finish(b.constant(Rational(1)), 0, tag_likelihood());
  CHECK(c.size() == 0);
  CHECK(evaluate(c, EvalPoint::zeros(0)) == Rational(1));
}

TEST_CASE("demo circuit evaluates the caption polynomial") {
  Circuit c = testgen::demo2_likelihood();
  EvalPoint p = EvalPoint::zeros(2);
  p.plain = {Rational(1), Rational(1)};
  CHECK(evaluate(c, p) == Rational(9, 20));
  p.plain = {Rational(0), Rational(0)};
  CHECK(evaluate(c, p) == Rational(9, 100));  // constant term at the origin
  // deterministic: same point, same exact value
  p.plain = {Rational(7, 3), Rational(-2, 5)};
  CHECK(evaluate(c, p) == evaluate(c, p));
}

TEST_CASE("size counts edges") {
  CircuitBuilder b;
  NodeId x1 = b.var(plain_var(1)), x2 = b.var(plain_var(2));
  NodeId mul = b.product({x1, x2});
  NodeId root = b.sum({{Rational(1, 2), mul}, {Rational(1, 2), x1}});
  Circuit c = b.finish(root, 2, tag_generating());
  CHECK(c.size() == 4);
  CHECK(testgen::demo2_likelihood().size() == 14);
}

TEST_CASE("validation rejects malformed tables") {
  // forward reference = a cycle in a table ordering
  {
    std::vector<Node> nodes;
    nodes.push_back(SumNode{{{Rational(1), 1}}});
    nodes.push_back(ConstNode{Rational(1)});
    CHECK_THROWS_AS(build_circuit(std::move(nodes), 0, 0, tag_raw()), cycle_error);
  }
  {
    std::vector<Node> nodes;
    nodes.push_back(SumNode{{{Rational(1), 7}}});
    CHECK_THROWS_AS(build_circuit(std::move(nodes), 0, 0, tag_raw()), dangling_child_error);
  }
  {
    std::vector<Node> nodes;
    nodes.push_back(ProductNode{{}});
    CHECK_THROWS_AS(build_circuit(std::move(nodes), 0, 0, tag_raw()), empty_children_error);
  }
  {
    std::vector<Node> nodes;
    nodes.push_back(VarNode{bar_var(1)});
    CHECK_THROWS_AS(build_circuit(std::move(nodes), 0, 1, tag_generating()), polarity_error);
    // the same leaf is fine under a two-polarity tag
    std::vector<Node> ok;
    ok.push_back(VarNode{bar_var(1)});
    CHECK(build_circuit(std::move(ok), 0, 1, tag_network()).size() == 0);
  }
  {
    std::vector<Node> nodes;
    nodes.push_back(VarNode{plain_var(3)});
    CHECK_THROWS_AS(build_circuit(std::move(nodes), 0, 2, tag_generating()),
                    dangling_child_error);
  }
  {
    std::vector<Node> nodes;
    nodes.push_back(ConstNode{Rational(1)});
    nodes.push_back(ConstNode{Rational(2)});
    nodes.push_back(DivNode{0, 1});
    CHECK_THROWS_AS(build_circuit(std::move(nodes), 2, 0, tag_raw(), false),
                    division_not_allowed);
    std::vector<Node> wrong_tag;
    wrong_tag.push_back(ConstNode{Rational(1)});
    wrong_tag.push_back(ConstNode{Rational(2)});
    wrong_tag.push_back(DivNode{0, 1});
    CHECK_THROWS_AS(build_circuit(std::move(wrong_tag), 2, 0, tag_likelihood(), true),
                    division_not_allowed);
  }
}

TEST_CASE("unreachable nodes are dropped and ids stay dense") {
  std::vector<Node> nodes;
  nodes.push_back(ConstNode{Rational(3)});   // unreachable
  nodes.push_back(VarNode{plain_var(1)});
  nodes.push_back(SumNode{{{Rational(2), 1}}});
  Circuit c = build_circuit(std::move(nodes), 2, 1, tag_generating());
  CHECK(c.nodes().size() == 2);
  CHECK(c.size() == 1);
}

TEST_CASE("scopes: const empty, leaves singletons, unions upward") {
  CircuitBuilder b;
  NodeId k = b.constant(Rational(5));
  NodeId x1 = b.var(plain_var(1));
  NodeId x2b = b.var(bar_var(2));
  NodeId mul = b.product({x1, x2b});
  NodeId root = b.sum({{Rational(1), mul}, {Rational(1), k}});
  Circuit c = b.finish(root, 2, tag_network());
  CHECK(c.scope(0).empty());
  CHECK(c.root_scope().contains(1));
  CHECK(c.root_scope().contains(2));
  CHECK(c.root_scope().count() == 2);
  Circuit demo = testgen::demo2_likelihood();
  CHECK(demo.root_scope() == full_scope(2));
}

TEST_CASE("division evaluation and the divide-by-zero contract") {
  CircuitBuilder b;
  NodeId x1 = b.var(plain_var(1));
  NodeId x1b = b.var(bar_var(1));
  NodeId div = b.div(x1, x1b);
  Circuit c = b.finish(b.product({div, x1b}), 1, tag_raw(), true);
  EvalPoint p = EvalPoint::zeros(1);
  p.plain = {Rational(3)};
  p.bar = {Rational(2)};
  CHECK(evaluate(c, p) == Rational(3));
  p.bar = {Rational(0)};
  CHECK_THROWS_AS(evaluate(c, p), divide_by_zero);
}

TEST_CASE("evaluate_mod matches exact evaluation mod p") {
  const uint64_t p = identity_prime;
  Circuit c = testgen::demo2_likelihood();
  testgen::Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    EvalPoint q = EvalPoint::zeros(2);
    ModPoint mq;
    mq.plain.resize(2);
    mq.bar.resize(2);
    for (int i = 0; i < 2; ++i) {
      long v = rng.range(-20, 20);
      q.plain[i] = Rational(v);
      mq.plain[i] = Rational(v).residue(p);
      mq.bar[i] = 0;
    }
    CHECK(evaluate_mod(c, mq, p) == evaluate(c, q).residue(p));
  }
}

TEST_CASE("hash-consing merges identical bodies; can be switched off") {
  CircuitBuilder dedup;
  NodeId a = dedup.var(plain_var(1));
  NodeId b = dedup.var(plain_var(1));
  CHECK(a == b);
  NodeId s1 = dedup.sum({{Rational(1, 2), a}});
  NodeId s2 = dedup.sum({{Rational(1, 2), b}});
  CHECK(s1 == s2);
  CHECK(dedup.sum({{Rational(1, 3), a}}) != s1);

  CircuitBuilder plain(BuildOptions{.hash_cons = false});
  CHECK(plain.var(plain_var(1)) != plain.var(plain_var(1)));
}

TEST_CASE("retag enforces polarity rules") {
  CircuitBuilder b;
  Circuit c = b.finish(b.var(bar_var(1)), 1, tag_network());
  CHECK_THROWS_AS(retag(c, tag_generating()), polarity_error);
  Circuit raw = retag(c, tag_raw());
  CHECK(raw.semantics().kind == Semantics::raw);
}

TEST_CASE("degree bounds") {
  CircuitBuilder b;
  NodeId x1 = b.var(plain_var(1));
  NodeId sq = b.product({x1, x1});
  NodeId root = b.sum({{Rational(1), sq}, {Rational(1), b.var(plain_var(2))}});
  Circuit c = b.finish(root, 2, tag_raw());
  CHECK(degree_bound(c) == 2);
  CHECK(var_degree_bound(c, 1) == 2);
  CHECK(var_degree_bound(c, 2) == 1);
}
