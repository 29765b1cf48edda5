#include "pcirc/division_elim.hpp"

#include <random>
#include <unordered_map>

#include "pcirc/errors.hpp"
#include "pcirc/leaf_transforms.hpp"

namespace pcirc {

bool LeafOffsets::all_zero() const {
  for (const auto& q : plain)
    if (!q.is_zero()) return false;
  for (const auto& q : bar)
    if (!q.is_zero()) return false;
  return true;
}

/* --- constant-aware node helpers.
   These fold only trivialities (literal constants, 0/1 absorption); they keep
   degree-0 homogeneous parts as literal constants, which the elimination DP
   relies on. Absent operands (nullopt) mean a syntactic zero. --- */

namespace {

using MaybeId = std::optional<NodeId>;

const Rational* const_value(const CircuitBuilder& b, NodeId id) {
  const auto* c = std::get_if<ConstNode>(&b.body(id));
  return c ? &c->value : nullptr;
}

MaybeId fold_mul(CircuitBuilder& b, MaybeId x, MaybeId y) {
  if (!x || !y) return std::nullopt;
  const Rational* cx = const_value(b, *x);
  const Rational* cy = const_value(b, *y);
  if (cx && cy) {
    Rational v = *cx * *cy;
    if (v.is_zero()) return std::nullopt;
    return b.constant(v);
  }
  if (cx) {
    if (cx->is_zero()) return std::nullopt;
    if (cx->is_one()) return y;
  }
  if (cy) {
    if (cy->is_zero()) return std::nullopt;
    if (cy->is_one()) return x;
  }
  return b.product({*x, *y});
}

MaybeId fold_sum(CircuitBuilder& b, const std::vector<WeightedChild>& raw_terms) {
  std::vector<WeightedChild> terms;
  Rational const_acc;
  bool any_const = false;
  for (const auto& t : raw_terms) {
    if (t.weight.is_zero()) continue;
    if (const Rational* c = const_value(b, t.child)) {
      const_acc += t.weight * *c;
      any_const = true;
    } else {
      terms.push_back(t);
    }
  }
  if (any_const && !const_acc.is_zero())
    terms.push_back({const_acc, b.constant(Rational(1))});
  if (terms.empty()) {
    if (any_const && !const_acc.is_zero()) return b.constant(const_acc);
    return std::nullopt;
  }
  if (terms.size() == 1) {
    if (terms[0].weight.is_one()) return terms[0].child;
    if (const Rational* c = const_value(b, terms[0].child))
      return b.constant(terms[0].weight * *c);
  }
  return b.sum(std::move(terms));
}

}  // namespace

/* --- gadget introduction --------------------------------------------------- */

Circuit introduce_gadgets(const Circuit& c, GadgetKind kind) {
  if (c.has_divisions())
    throw semantics_mismatch("introduce_gadgets expects a division-free circuit");
  if (c.semantics().two_polarity())
    throw semantics_mismatch("introduce_gadgets expects a single-polarity circuit");
  const int n = c.var_count();
  CircuitBuilder b;
  std::vector<NodeId> den(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    if (kind == GadgetKind::evidence_completion)
      den[i] = b.sum({{Rational(1), b.var(plain_var(i))}, {Rational(1), b.var(bar_var(i))}});
    else
      den[i] = b.var(bar_var(i));
  }
  Rebuilder rb(c, b, [&](CircuitBuilder& bb, const VarRef& ref) {
    if (ref.pol == Polarity::bar)
      throw polarity_error("bar leaf in a single-polarity circuit");
    return bb.div(bb.var(ref), den[ref.index]);
  });
  NodeId body = rb.copy(c.root());
  NodeId root = body;
  if (n > 0) {
    std::vector<NodeId> factors(den.begin() + 1, den.end());
    factors.push_back(body);
    root = b.product(std::move(factors));
  }
  return b.finish(root, n, tag_raw(), true);
}

/* --- pull-up ----------------------------------------------------------------- */

Circuit DivisionSplit::numerator() const { return extract_subcircuit(host, num, tag_raw()); }
Circuit DivisionSplit::denominator() const { return extract_subcircuit(host, den, tag_raw()); }

DivisionSplit pull_up(const Circuit& c) {
  CircuitBuilder b;
  const NodeId one = b.constant(Rational(1));
  auto is_one = [&](NodeId id) {
    const Rational* v = const_value(b, id);
    return v && v->is_one();
  };
  auto mul2 = [&](NodeId x, NodeId y) -> NodeId {
    if (is_one(x)) return y;
    if (is_one(y)) return x;
    return b.product({x, y});
  };
  auto weighted = [&](const Rational& w, NodeId id) -> NodeId {
    if (w.is_one()) return id;
    if (const Rational* v = const_value(b, id)) return b.constant(w * *v);
    return b.sum({{w, id}});
  };

  struct Pair {
    NodeId num, den;
  };
  std::vector<Pair> pairs(c.nodes().size());
  for (NodeId id = 0; id < c.nodes().size(); ++id) {
    const Node& node = c.node(id);
    if (const auto* s = std::get_if<SumNode>(&node)) {
      // fold pairwise, left to right: a/b + c/d = (ad + bc)/(bd)
      Pair acc{weighted(s->children[0].weight, pairs[s->children[0].child].num),
               pairs[s->children[0].child].den};
      for (std::size_t j = 1; j < s->children.size(); ++j) {
        const Pair& term = pairs[s->children[j].child];
        NodeId tn = weighted(s->children[j].weight, term.num);
        NodeId lhs = mul2(acc.num, term.den);
        NodeId rhs = mul2(tn, acc.den);
        acc = {b.sum({{Rational(1), lhs}, {Rational(1), rhs}}), mul2(acc.den, term.den)};
      }
      pairs[id] = acc;
    } else if (const auto* p = std::get_if<ProductNode>(&node)) {
      Pair acc{one, one};
      for (NodeId ch : p->children)
        acc = {mul2(acc.num, pairs[ch].num), mul2(acc.den, pairs[ch].den)};
      pairs[id] = acc;
    } else if (const auto* d = std::get_if<DivNode>(&node)) {
      const Pair& pn = pairs[d->num];
      const Pair& pd = pairs[d->den];
      pairs[id] = {mul2(pn.num, pd.den), mul2(pn.den, pd.num)};
    } else if (const auto* v = std::get_if<VarNode>(&node)) {
      pairs[id] = {b.var(v->ref), one};
    } else {
      pairs[id] = {b.constant(std::get<ConstNode>(node).value), one};
    }
  }
  const Pair& root = pairs[c.root()];
  NodeId div = b.div(root.num, root.den);
  DivisionSplit split{b.finish(div, c.var_count(), tag_raw(), true), 0, 0};
  // finish() renumbers; recover the div operands from the new root.
  const auto& dn = std::get<DivNode>(split.host.node(split.host.root()));
  split.num = dn.num;
  split.den = dn.den;
  return split;
}

/* --- translation ----------------------------------------------------------- */

Circuit translate_inputs(const Circuit& c, const LeafOffsets& offsets) {
  if (c.has_divisions())
    throw semantics_mismatch("translate_inputs expects a division-free circuit");
  CircuitBuilder b;
  Rebuilder rb(c, b, [&](CircuitBuilder& bb, const VarRef& ref) -> NodeId {
    const Rational& o = offsets.of(ref);
    NodeId leaf = bb.var(ref);
    if (o.is_zero()) return leaf;
    return bb.sum({{Rational(1), leaf}, {o, bb.constant(Rational(1))}});
  });
  return b.finish(rb.copy(c.root()), c.var_count(), tag_raw());
}

/* --- homogenization ----------------------------------------------------------- */

namespace {

using Stack = std::vector<MaybeId>;

/// Homogeneous parts of (optionally shifted) host sub-DAGs, built into `b`.
/// Stacks are memoized per source node so numerator and denominator walks
/// share structure.
struct Homogenizer {
  CircuitBuilder& b;
  const Circuit& src;
  int degree;
  const LeafOffsets* shift;  // may be null
  std::unordered_map<NodeId, Stack> memo;

  Stack mul_stacks(const Stack& x, const Stack& y) {
    Stack out(degree + 1);
    for (int i = 0; i <= degree; ++i) {
      std::vector<WeightedChild> terms;
      for (int j = 0; j <= i; ++j) {
        MaybeId prod = fold_mul(b, x[j], y[i - j]);
        if (prod) terms.push_back({Rational(1), *prod});
      }
      out[i] = fold_sum(b, terms);
    }
    return out;
  }

  Stack walk(NodeId id) {
    auto it = memo.find(id);
    if (it != memo.end()) return it->second;
    const Node& node = src.node(id);
    Stack out(degree + 1);
    if (const auto* s = std::get_if<SumNode>(&node)) {
      std::vector<Stack> kids;
      kids.reserve(s->children.size());
      for (const auto& wc : s->children) kids.push_back(walk(wc.child));
      for (int i = 0; i <= degree; ++i) {
        std::vector<WeightedChild> terms;
        for (std::size_t j = 0; j < kids.size(); ++j)
          if (kids[j][i]) terms.push_back({s->children[j].weight, *kids[j][i]});
        out[i] = fold_sum(b, terms);
      }
    } else if (const auto* p = std::get_if<ProductNode>(&node)) {
      Stack acc(degree + 1);
      acc[0] = b.constant(Rational(1));
      for (NodeId ch : p->children) acc = mul_stacks(acc, walk(ch));
      out = std::move(acc);
    } else if (std::holds_alternative<DivNode>(node)) {
      throw division_not_allowed("homogenization requires a division-free operand");
    } else if (const auto* v = std::get_if<VarNode>(&node)) {
      if (degree >= 1) out[1] = b.var(v->ref);
      if (shift) {
        const Rational& o = shift->of(v->ref);
        if (!o.is_zero()) out[0] = b.constant(o);
      }
    } else {
      const Rational& val = std::get<ConstNode>(node).value;
      if (!val.is_zero()) out[0] = b.constant(val);
    }
    memo.emplace(id, out);
    return out;
  }
};

}  // namespace

Circuit HomStack::part(std::size_t i) const { return extract_subcircuit(host, parts[i], tag_raw()); }

HomStack homogenize(const Circuit& c, int degree) {
  if (degree < 0) throw error("homogenize requires degree >= 0");
  CircuitBuilder b;
  Homogenizer h{b, c, degree, nullptr, {}};
  Stack stack = h.walk(c.root());
  std::vector<WeightedChild> all;
  std::vector<NodeId> ids;
  for (int i = 0; i <= degree; ++i) {
    NodeId part = stack[i] ? *stack[i] : b.constant(Rational(0));
    ids.push_back(part);
    all.push_back({Rational(1), part});
  }
  Circuit host = b.finish(b.sum(std::move(all)), c.var_count(), tag_raw());
  // finish() renumbers densely; the root sum's children are the parts in order.
  const auto& root_sum = std::get<SumNode>(host.node(host.root()));
  HomStack out{std::move(host), {}};
  for (const auto& wc : root_sum.children) out.parts.push_back(wc.child);
  return out;
}

/* --- division elimination -------------------------------------------------------- */

namespace {

EvalPoint offsets_as_point(const LeafOffsets& shift, int n) {
  EvalPoint p = EvalPoint::zeros(n);
  for (int i = 0; i < n; ++i) {
    p.plain[i] = shift.plain[i];
    p.bar[i] = shift.bar[i];
  }
  return p;
}

}  // namespace

Circuit eliminate_division(const DivisionSplit& split, int target_degree,
                           const LeafOffsets& shift, const EliminationOptions& opts) {
  const int n = split.host.var_count();
  const int d = target_degree;
  if (d < 0) throw error("target degree must be >= 0");
  if (shift.plain.size() < static_cast<std::size_t>(n) ||
      shift.bar.size() < static_cast<std::size_t>(n))
    throw error("shift does not cover all variables");

  Circuit b_standalone = split.denominator();
  Rational b0 = evaluate(b_standalone, offsets_as_point(shift, n));
  if (b0.is_zero()) throw singular_shift("denominator vanishes at the shift point");
  if (opts.homogeneous_only && !(shift.all_zero() && b0.is_one()))
    throw error("homogeneous_only elimination requires shift = 0 and B(0) = 1");

  CircuitBuilder b;
  Homogenizer h{b, split.host, d, shift.all_zero() ? nullptr : &shift, {}};
  Stack ha = h.walk(split.num);
  Stack hb = h.walk(split.den);

  // R = 1 - B/b0 has constant term exactly 0; its degree-0 part must have
  // folded to a literal constant equal to b0.
  if (hb[0]) {
    const Rational* c0 = const_value(b, *hb[0]);
    if (!c0 || !(*c0 == b0)) throw error("internal: denominator constant term mismatch");
  } else if (!b0.is_zero()) {
    // hb[0] null means constant term 0, contradicting b0 != 0 unless d < 0.
    throw error("internal: denominator lost its constant term");
  }
  const Rational inv_b0 = b0.inverse();
  Stack hr(d + 1);
  for (int i = 1; i <= d; ++i)
    if (hb[i]) hr[i] = fold_sum(b, {{-inv_b0, *hb[i]}});

  // acc[i] collects H_i[A (1-B/b0)^j] over j; P_j has min degree j, so the
  // series is exhausted after d steps.
  std::vector<std::vector<WeightedChild>> acc(d + 1);
  Stack power = ha;
  for (int i = 0; i <= d; ++i)
    if (power[i]) acc[i].push_back({Rational(1), *power[i]});
  for (int j = 1; j <= d; ++j) {
    Stack next(d + 1);
    bool any = false;
    for (int i = j; i <= d; ++i) {
      std::vector<WeightedChild> terms;
      for (int m = 1; m <= i - j + 1; ++m) {
        MaybeId prod = fold_mul(b, power[i - m], hr[m]);
        if (prod) terms.push_back({Rational(1), *prod});
      }
      next[i] = fold_sum(b, terms);
      if (next[i]) {
        acc[i].push_back({Rational(1), *next[i]});
        any = true;
      }
    }
    if (!any) break;
    power = std::move(next);
  }

  std::vector<WeightedChild> total;
  if (opts.homogeneous_only) {
    total = std::move(acc[d]);
  } else {
    for (int i = 0; i <= d; ++i)
      for (const auto& t : acc[i]) total.push_back(t);
  }
  MaybeId result = fold_sum(b, total);
  if (result && !inv_b0.is_one()) result = fold_mul(b, b.constant(inv_b0), result);
  NodeId root = result ? *result : b.constant(Rational(0));
  Circuit out = b.finish(root, n, tag_raw());

  if (shift.all_zero()) return out;
  LeafOffsets back = shift;
  for (auto& q : back.plain) q = -q;
  for (auto& q : back.bar) q = -q;
  return translate_inputs(out, back);
}

Circuit eliminate_division_auto(const DivisionSplit& split, int target_degree, uint64_t seed) {
  const int n = split.host.var_count();
  Circuit den = split.denominator();
  auto try_shift = [&](const LeafOffsets& shift) -> std::optional<Circuit> {
    if (evaluate(den, offsets_as_point(shift, n)).is_zero()) return std::nullopt;
    return eliminate_division(split, target_degree, shift);
  };
  LeafOffsets ones = LeafOffsets::zero(n);
  ones.plain.assign(n, Rational(1));
  ones.bar.assign(n, Rational(1));
  if (auto out = try_shift(ones)) return *out;
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 32; ++attempt) {
    LeafOffsets shift = LeafOffsets::zero(n);
    for (int i = 0; i < n; ++i) {
      shift.plain[i] = Rational(static_cast<long>(rng() % 19) - 9, 1 + static_cast<long>(rng() % 4));
      shift.bar[i] = Rational(static_cast<long>(rng() % 19) - 9, 1 + static_cast<long>(rng() % 4));
    }
    if (auto out = try_shift(shift)) return *out;
  }
  throw singular_shift("no shift point found with a nonzero denominator");
}

/* --- starred edges ------------------------------------------------------------------ */

Circuit edge_transform(const Circuit& c, int edge) { return edge_transform(c, edge, nullptr); }

Circuit edge_transform(const Circuit& c, int edge, EdgePipelineArtifacts* artifacts) {
  if (edge != 1 && edge != 4 && edge != 7 && edge != 10)
    throw error("edge_transform handles edges 1, 4, 7, 10");
  if (!(c.semantics() == edge_source(edge)))
    throw semantics_mismatch("edge " + std::to_string(edge) + " expects semantics " +
                             semantics_name(edge_source(edge)) + ", got " +
                             semantics_name(c.semantics()));
  if (c.has_divisions())
    throw semantics_mismatch("edge_transform expects a division-free circuit");
  const GadgetKind kind = (edge == 4 || edge == 10) ? GadgetKind::evidence_completion
                                                    : GadgetKind::coefficient_extraction;
  const int n = c.var_count();
  Circuit gadget = introduce_gadgets(c, kind);
  DivisionSplit split = pull_up(gadget);
  Circuit out = eliminate_division(split, n, LeafOffsets::bar_ones(n));
  if (artifacts) {
    artifacts->split_num = split.num;
    artifacts->split_den = split.den;
    artifacts->gadget = std::move(gadget);
    artifacts->split_host = std::move(split.host);
  }
  return retag(out, edge_target(edge));
}

}  // namespace pcirc
