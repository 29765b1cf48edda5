#include "pcirc/structured.hpp"

#include <unordered_map>

#include "pcirc/errors.hpp"

namespace pcirc {

std::optional<DecomposabilityWitness> decomposability_witness(const Circuit& c) {
  for (NodeId id = 0; id < c.nodes().size(); ++id) {
    const auto* p = std::get_if<ProductNode>(&c.node(id));
    if (!p) continue;
    ScopeSet seen;
    for (NodeId ch : p->children) {
      int shared = c.scope(ch).first_common(seen);
      if (shared) return DecomposabilityWitness{id, shared};
      seen.unite(c.scope(ch));
    }
  }
  return std::nullopt;
}

bool is_decomposable(const Circuit& c) { return !decomposability_witness(c).has_value(); }

std::optional<SmoothnessWitness> smoothness_witness(const Circuit& c) {
  for (NodeId id = 0; id < c.nodes().size(); ++id) {
    const auto* s = std::get_if<SumNode>(&c.node(id));
    if (!s) continue;
    for (const auto& wc : s->children)
      if (!(c.scope(wc.child) == c.scope(s->children[0].child)))
        return SmoothnessWitness{id};
  }
  return std::nullopt;
}

bool is_smooth(const Circuit& c) { return !smoothness_witness(c).has_value(); }

/* --- smoothing-based completion ------------------------------------------- */

Circuit smooth_complete(const Circuit& c, SmoothGadget gadget) {
  const SemanticsTag& tag = c.semantics();
  SemanticsTag out_tag;
  if (gadget == SmoothGadget::indicator_pair) {
    if (tag.kind == Semantics::likelihood)
      out_tag = tag_network();
    else if (tag.kind == Semantics::fourier)
      out_tag = tag_fourier_ind();
    else
      throw semantics_mismatch("indicator_pair completion expects likelihood or fourier, got " +
                               semantics_name(tag));
  } else {
    if (tag.kind == Semantics::generating)
      out_tag = tag_network();
    else if (tag.kind == Semantics::likelihood_pm)
      out_tag = tag_fourier_ind();
    else
      throw semantics_mismatch("bar_only completion expects generating or likelihood_pm, got " +
                               semantics_name(tag));
  }
  if (c.has_divisions())
    throw semantics_mismatch("smooth_complete expects a division-free circuit");
  if (auto witness = decomposability_witness(c))
    throw not_decomposable(witness->node, witness->variable);

  const int n = c.var_count();
  CircuitBuilder b;
  std::vector<NodeId> gadget_node(n + 1, 0);
  std::vector<char> gadget_built(n + 1, 0);
  auto gap_gadget = [&](int i) {
    if (!gadget_built[i]) {
      gadget_node[i] =
          gadget == SmoothGadget::indicator_pair
              ? b.sum({{Rational(1), b.var(plain_var(i))}, {Rational(1), b.var(bar_var(i))}})
              : b.var(bar_var(i));
      gadget_built[i] = 1;
    }
    return gadget_node[i];
  };
  auto fill_gaps = [&](NodeId body, const ScopeSet& have, const ScopeSet& want) -> NodeId {
    std::vector<int> gaps = have.missing_from(want);
    if (gaps.empty()) return body;
    std::vector<NodeId> children{body};
    for (int i : gaps) children.push_back(gap_gadget(i));
    return b.product(std::move(children));
  };

  std::vector<NodeId> mapped(c.nodes().size(), 0);
  for (NodeId id = 0; id < c.nodes().size(); ++id) {
    const Node& node = c.node(id);
    if (const auto* s = std::get_if<SumNode>(&node)) {
      std::vector<WeightedChild> children;
      children.reserve(s->children.size());
      for (const auto& wc : s->children)
        children.push_back(
            {wc.weight, fill_gaps(mapped[wc.child], c.scope(wc.child), c.scope(id))});
      mapped[id] = b.sum(std::move(children));
    } else if (const auto* p = std::get_if<ProductNode>(&node)) {
      std::vector<NodeId> children;
      children.reserve(p->children.size());
      for (NodeId ch : p->children) children.push_back(mapped[ch]);
      mapped[id] = b.product(std::move(children));
    } else if (const auto* v = std::get_if<VarNode>(&node)) {
      mapped[id] = b.var(v->ref);
    } else {
      mapped[id] = b.constant(std::get<ConstNode>(node).value);
    }
  }
  NodeId root = fill_gaps(mapped[c.root()], c.root_scope(), full_scope(n));
  return b.finish(root, n, out_tag);
}

/* --- leaf-only Fourier rewrite ------------------------------------------------ */

Circuit normalize_for_fourier(const Circuit& c) {
  if (c.has_divisions())
    throw semantics_mismatch("normalize_for_fourier expects a division-free circuit");
  CircuitBuilder b;
  std::vector<NodeId> mapped(c.nodes().size(), 0);
  for (NodeId id = 0; id < c.nodes().size(); ++id) {
    const Node& node = c.node(id);
    if (const auto* s = std::get_if<SumNode>(&node)) {
      std::vector<WeightedChild> children;
      for (const auto& wc : s->children) children.push_back({wc.weight, mapped[wc.child]});
      mapped[id] = b.sum(std::move(children));
    } else if (const auto* p = std::get_if<ProductNode>(&node)) {
      std::vector<NodeId> children;
      for (NodeId ch : p->children) {
        bool leaf = std::holds_alternative<VarNode>(c.node(ch)) ||
                    std::holds_alternative<ConstNode>(c.node(ch));
        children.push_back(leaf ? b.sum({{Rational(1), mapped[ch]}}) : mapped[ch]);
      }
      mapped[id] = b.product(std::move(children));
    } else if (const auto* v = std::get_if<VarNode>(&node)) {
      mapped[id] = b.var(v->ref);
    } else {
      mapped[id] = b.constant(std::get<ConstNode>(node).value);
    }
  }
  return b.finish(mapped[c.root()], c.var_count(), c.semantics(), c.divisions_allowed());
}

Circuit fourier_leaves(const Circuit& input) {
  if (input.semantics().kind != Semantics::likelihood)
    throw semantics_mismatch("fourier_leaves expects semantics likelihood, got " +
                             semantics_name(input.semantics()));
  if (input.has_divisions())
    throw semantics_mismatch("fourier_leaves expects a division-free circuit");
  if (auto witness = decomposability_witness(input))
    throw not_decomposable(witness->node, witness->variable);

  const Circuit c = normalize_for_fourier(input);
  const int n = c.var_count();
  CircuitBuilder b;

  // Context-free images: x_i over scope {i} transforms to (1 - 2 x_i)/2.
  auto var_image = [&](int i) {
    return b.sum(
        {{Rational(1, 2), b.constant(Rational(1))}, {Rational(-1), b.var(plain_var(i))}});
  };
  // Constant k as a scope-{i} function transforms to k (1 - x_i).
  auto scoped_const_image = [&](const Rational& k, int i) {
    return b.sum({{k, b.constant(Rational(1))}, {-k, b.var(plain_var(i))}});
  };
  // A variable missing from a scope contributes a (1 - x_i) factor.
  auto gap_factor = [&](int i) {
    return b.sum({{Rational(1), b.constant(Rational(1))}, {Rational(-1), b.var(plain_var(i))}});
  };

  std::vector<NodeId> mapped(c.nodes().size(), 0);
  for (NodeId id = 0; id < c.nodes().size(); ++id) {
    const Node& node = c.node(id);
    if (const auto* s = std::get_if<SumNode>(&node)) {
      const ScopeSet& scope = c.scope(id);
      if (scope.empty()) {
        // constant subcircuit; the zero-dimensional transform is the identity
        std::vector<WeightedChild> children;
        for (const auto& wc : s->children) children.push_back({wc.weight, mapped[wc.child]});
        mapped[id] = b.sum(std::move(children));
        continue;
      }
      auto singleton = scope.members();
      std::vector<WeightedChild> children;
      for (const auto& wc : s->children) {
        const Node& child = c.node(wc.child);
        if (const auto* k = std::get_if<ConstNode>(&child)) {
          if (singleton.size() != 1) throw unscoped_constant(wc.child);
          children.push_back({wc.weight, scoped_const_image(k->value, singleton[0])});
        } else if (c.scope(wc.child).empty()) {
          throw unscoped_constant(wc.child);
        } else if (!(c.scope(wc.child) == scope)) {
          throw not_smooth(id);
        } else {
          children.push_back({wc.weight, mapped[wc.child]});
        }
      }
      mapped[id] = b.sum(std::move(children));
    } else if (const auto* p = std::get_if<ProductNode>(&node)) {
      std::vector<NodeId> children;
      for (NodeId ch : p->children) children.push_back(mapped[ch]);
      mapped[id] = b.product(std::move(children));
    } else if (const auto* v = std::get_if<VarNode>(&node)) {
      if (v->ref.pol == Polarity::bar)
        throw polarity_error("bar leaf in a likelihood circuit");
      mapped[id] = var_image(v->ref.index);
    } else {
      mapped[id] = b.constant(std::get<ConstNode>(node).value);
    }
  }

  NodeId root = mapped[c.root()];
  std::vector<int> gaps = c.root_scope().missing_from(full_scope(n));
  if (!gaps.empty()) {
    std::vector<NodeId> children{root};
    for (int i : gaps) children.push_back(gap_factor(i));
    root = b.product(std::move(children));
  }
  return b.finish(root, n, tag_fourier());
}

}  // namespace pcirc
