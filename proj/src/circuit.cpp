#include "pcirc/circuit.hpp"

#include <algorithm>

#include "pcirc/errors.hpp"

namespace pcirc {

std::string semantics_name(const SemanticsTag& tag) {
  switch (tag.kind) {
    case Semantics::likelihood: return "likelihood";
    case Semantics::network: return "network";
    case Semantics::generating: return "generating";
    case Semantics::likelihood_pm: return "likelihood_pm";
    case Semantics::fourier: return "fourier";
    case Semantics::fourier_ind: return "fourier_ind";
    case Semantics::categorical_generating:
      return "categorical_generating k=" + std::to_string(tag.categories);
    case Semantics::raw: return "raw";
  }
  return "?";
}

bool node_equal(const Node& a, const Node& b) {
  if (a.index() != b.index()) return false;
  if (const auto* s = std::get_if<SumNode>(&a))
    return s->children == std::get<SumNode>(b).children;
  if (const auto* p = std::get_if<ProductNode>(&a))
    return p->children == std::get<ProductNode>(b).children;
  if (const auto* d = std::get_if<DivNode>(&a)) {
    const auto& e = std::get<DivNode>(b);
    return d->num == e.num && d->den == e.den;
  }
  if (const auto* v = std::get_if<VarNode>(&a)) return v->ref == std::get<VarNode>(b).ref;
  return std::get<ConstNode>(a).value == std::get<ConstNode>(b).value;
}

namespace {
inline std::size_t mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}
}  // namespace

std::size_t node_hash(const Node& n) {
  std::size_t h = n.index() * 0x517cc1b727220a95ULL;
  if (const auto* s = std::get_if<SumNode>(&n)) {
    for (const auto& wc : s->children) {
      h = mix(h, wc.child);
      h = mix(h, wc.weight.hash());
    }
  } else if (const auto* p = std::get_if<ProductNode>(&n)) {
    for (NodeId c : p->children) h = mix(h, c);
  } else if (const auto* d = std::get_if<DivNode>(&n)) {
    h = mix(h, d->num);
    h = mix(h, 0x9e3779b9u + d->den);
  } else if (const auto* v = std::get_if<VarNode>(&n)) {
    h = mix(h, static_cast<std::size_t>(v->ref.index) * 2 +
                   (v->ref.pol == Polarity::bar ? 1 : 0));
  } else {
    h = mix(h, std::get<ConstNode>(n).value.hash());
  }
  return h;
}

/* --- ScopeSet ----------------------------------------------------------- */

void ScopeSet::add(int index) {
  std::size_t w = static_cast<std::size_t>(index - 1) / 64;
  if (words_.size() <= w) words_.resize(w + 1, 0);
  words_[w] |= uint64_t{1} << ((index - 1) % 64);
}

bool ScopeSet::contains(int index) const {
  std::size_t w = static_cast<std::size_t>(index - 1) / 64;
  return w < words_.size() && (words_[w] >> ((index - 1) % 64)) & 1;
}

void ScopeSet::unite(const ScopeSet& other) {
  if (words_.size() < other.words_.size()) words_.resize(other.words_.size(), 0);
  for (std::size_t i = 0; i < other.words_.size(); ++i) words_[i] |= other.words_[i];
}

void ScopeSet::trim() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

bool ScopeSet::empty() const {
  for (uint64_t w : words_)
    if (w) return false;
  return true;
}

std::size_t ScopeSet::count() const {
  std::size_t c = 0;
  for (uint64_t w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
  return c;
}

bool ScopeSet::operator==(const ScopeSet& other) const {
  ScopeSet a = *this, b = other;
  a.trim();
  b.trim();
  return a.words_ == b.words_;
}

bool ScopeSet::subset_of(const ScopeSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    uint64_t o = i < other.words_.size() ? other.words_[i] : 0;
    if (words_[i] & ~o) return false;
  }
  return true;
}

int ScopeSet::first_common(const ScopeSet& other) const {
  std::size_t m = std::min(words_.size(), other.words_.size());
  for (std::size_t i = 0; i < m; ++i) {
    uint64_t both = words_[i] & other.words_[i];
    if (both) return static_cast<int>(i * 64 + __builtin_ctzll(both) + 1);
  }
  return 0;
}

std::vector<int> ScopeSet::missing_from(const ScopeSet& universe) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < universe.words_.size(); ++i) {
    uint64_t have = i < words_.size() ? words_[i] : 0;
    uint64_t gap = universe.words_[i] & ~have;
    while (gap) {
      int b = __builtin_ctzll(gap);
      out.push_back(static_cast<int>(i * 64 + b + 1));
      gap &= gap - 1;
    }
  }
  return out;
}

std::vector<int> ScopeSet::members() const {
  ScopeSet none;
  return none.missing_from(*this);
}

std::string ScopeSet::str() const {
  std::string s = "{";
  bool first = true;
  for (int i : members()) {
    if (!first) s += ",";
    s += "x" + std::to_string(i);
    first = false;
  }
  return s + "}";
}

ScopeSet full_scope(int n) {
  ScopeSet s;
  for (int i = 1; i <= n; ++i) s.add(i);
  return s;
}

/* --- build -------------------------------------------------------------- */

Circuit build_circuit(std::vector<Node> nodes, NodeId root, int n, SemanticsTag semantics,
                      bool divisions_allowed) {
  if (semantics.kind == Semantics::categorical_generating && semantics.categories < 2)
    throw error("categorical semantics requires k >= 2");
  if (root >= nodes.size()) throw dangling_child_error("output references undefined node");
  const bool bar_ok =
      semantics.two_polarity() || semantics.kind == Semantics::raw || divisions_allowed;

  auto check_child = [&](NodeId parent, NodeId child) {
    if (child >= nodes.size())
      throw dangling_child_error("node n" + std::to_string(parent) +
                                 " references undefined node n" + std::to_string(child));
    if (child >= parent)
      throw cycle_error("node n" + std::to_string(parent) +
                        " references n" + std::to_string(child) +
                        " which does not precede it");
  };

  for (NodeId id = 0; id < nodes.size(); ++id) {
    const Node& node = nodes[id];
    if (const auto* s = std::get_if<SumNode>(&node)) {
      if (s->children.empty())
        throw empty_children_error("sum node n" + std::to_string(id) + " has no children");
      for (const auto& wc : s->children) check_child(id, wc.child);
    } else if (const auto* p = std::get_if<ProductNode>(&node)) {
      if (p->children.empty())
        throw empty_children_error("product node n" + std::to_string(id) + " has no children");
      for (NodeId c : p->children) check_child(id, c);
    } else if (const auto* d = std::get_if<DivNode>(&node)) {
      if (!divisions_allowed)
        throw division_not_allowed("division node n" + std::to_string(id) +
                                   " in a division-free circuit");
      if (semantics.kind != Semantics::raw)
        throw division_not_allowed("division nodes require raw semantics");
      check_child(id, d->num);
      check_child(id, d->den);
    } else if (const auto* v = std::get_if<VarNode>(&node)) {
      if (v->ref.index < 1 || v->ref.index > n)
        throw dangling_child_error("variable x" + std::to_string(v->ref.index) +
                                   " out of range for n=" + std::to_string(n));
      if (v->ref.pol == Polarity::bar && !bar_ok)
        throw polarity_error("bar leaf n" + std::to_string(id) + " under semantics " +
                             semantics_name(semantics));
    }
  }

  // Drop unreachable nodes, keeping relative order (ids stay topological).
  std::vector<char> reachable(nodes.size(), 0);
  {
    std::vector<NodeId> stack{root};
    reachable[root] = 1;
    auto push = [&](NodeId c) {
      if (!reachable[c]) {
        reachable[c] = 1;
        stack.push_back(c);
      }
    };
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      const Node& node = nodes[id];
      if (const auto* s = std::get_if<SumNode>(&node))
        for (const auto& wc : s->children) push(wc.child);
      else if (const auto* p = std::get_if<ProductNode>(&node))
        for (NodeId c : p->children) push(c);
      else if (const auto* d = std::get_if<DivNode>(&node)) {
        push(d->num);
        push(d->den);
      }
    }
  }

  std::vector<NodeId> remap(nodes.size(), 0);
  std::vector<Node> kept;
  kept.reserve(nodes.size());
  for (NodeId id = 0; id < nodes.size(); ++id) {
    if (!reachable[id]) continue;
    remap[id] = static_cast<NodeId>(kept.size());
    Node node = std::move(nodes[id]);
    if (auto* s = std::get_if<SumNode>(&node))
      for (auto& wc : s->children) wc.child = remap[wc.child];
    else if (auto* p = std::get_if<ProductNode>(&node))
      for (NodeId& c : p->children) c = remap[c];
    else if (auto* d = std::get_if<DivNode>(&node)) {
      d->num = remap[d->num];
      d->den = remap[d->den];
    }
    kept.push_back(std::move(node));
  }

  Circuit c;
  c.n_ = n;
  c.nodes_ = std::move(kept);
  c.root_ = remap[root];
  c.semantics_ = semantics;
  c.divisions_allowed_ = divisions_allowed;
  c.scopes_.resize(c.nodes_.size());
  for (NodeId id = 0; id < c.nodes_.size(); ++id) {
    const Node& node = c.nodes_[id];
    if (const auto* s = std::get_if<SumNode>(&node)) {
      c.size_ += s->children.size();
      for (const auto& wc : s->children) c.scopes_[id].unite(c.scopes_[wc.child]);
    } else if (const auto* p = std::get_if<ProductNode>(&node)) {
      c.size_ += p->children.size();
      for (NodeId ch : p->children) c.scopes_[id].unite(c.scopes_[ch]);
    } else if (const auto* d = std::get_if<DivNode>(&node)) {
      c.size_ += 2;
      c.div_count_ += 1;
      c.scopes_[id].unite(c.scopes_[d->num]);
      c.scopes_[id].unite(c.scopes_[d->den]);
    } else if (const auto* v = std::get_if<VarNode>(&node)) {
      c.scopes_[id].add(v->ref.index);
    }
  }
  return c;
}

Circuit retag(const Circuit& c, SemanticsTag tag) {
  std::vector<Node> nodes(c.nodes().begin(), c.nodes().end());
  return build_circuit(std::move(nodes), c.root(), c.var_count(), tag, c.divisions_allowed());
}

/* --- builder ------------------------------------------------------------ */

NodeId CircuitBuilder::intern(Node node) {
  if (opts_.hash_cons) {
    std::size_t h = node_hash(node);
    auto it = dedup_.find(h);
    if (it != dedup_.end())
      for (NodeId cand : it->second)
        if (node_equal(nodes_[cand], node)) return cand;
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(std::move(node));
    dedup_[h].push_back(id);
    return id;
  }
  NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(std::move(node));
  return id;
}

NodeId CircuitBuilder::constant(Rational value) { return intern(ConstNode{std::move(value)}); }
NodeId CircuitBuilder::var(VarRef ref) { return intern(VarNode{ref}); }

NodeId CircuitBuilder::sum(std::vector<WeightedChild> children) {
  if (children.empty()) throw empty_children_error("sum node with no children");
  return intern(SumNode{std::move(children)});
}

NodeId CircuitBuilder::product(std::vector<NodeId> children) {
  if (children.empty()) throw empty_children_error("product node with no children");
  return intern(ProductNode{std::move(children)});
}

NodeId CircuitBuilder::div(NodeId num, NodeId den) { return intern(DivNode{num, den}); }

Circuit CircuitBuilder::finish(NodeId root, int n, SemanticsTag semantics,
                               bool divisions_allowed) {
  return build_circuit(nodes_, root, n, semantics, divisions_allowed);
}

/* --- rebuild ------------------------------------------------------------ */

NodeId Rebuilder::copy(NodeId src_root) {
  auto it = memo_.find(src_root);
  if (it != memo_.end()) return it->second;
  const Node& node = src_.node(src_root);
  NodeId out;
  if (const auto* s = std::get_if<SumNode>(&node)) {
    std::vector<WeightedChild> children;
    children.reserve(s->children.size());
    for (const auto& wc : s->children) children.push_back({wc.weight, copy(wc.child)});
    out = dst_.sum(std::move(children));
  } else if (const auto* p = std::get_if<ProductNode>(&node)) {
    std::vector<NodeId> children;
    children.reserve(p->children.size());
    for (NodeId c : p->children) children.push_back(copy(c));
    out = dst_.product(std::move(children));
  } else if (const auto* d = std::get_if<DivNode>(&node)) {
    NodeId num = copy(d->num);
    out = dst_.div(num, copy(d->den));
  } else if (const auto* v = std::get_if<VarNode>(&node)) {
    out = leaf_map_ ? leaf_map_(dst_, v->ref) : dst_.var(v->ref);
  } else {
    out = dst_.constant(std::get<ConstNode>(node).value);
  }
  memo_.emplace(src_root, out);
  return out;
}

Circuit extract_subcircuit(const Circuit& c, NodeId root, SemanticsTag tag,
                           bool divisions_allowed) {
  CircuitBuilder b;
  Rebuilder r(c, b);
  NodeId out = r.copy(root);
  return b.finish(out, c.var_count(), tag, divisions_allowed);
}

/* --- evaluation ---------------------------------------------------------- */

namespace {

const Rational& leaf_value(const VarRef& ref, const EvalPoint& point) {
  const auto& side = ref.pol == Polarity::plain ? point.plain : point.bar;
  if (static_cast<std::size_t>(ref.index) > side.size())
    throw error("evaluation point does not cover variable x" + std::to_string(ref.index));
  return side[ref.index - 1];
}

}  // namespace

Rational evaluate(const Circuit& c, const EvalPoint& point) {
  std::vector<Rational> value(c.nodes().size());
  for (NodeId id = 0; id < c.nodes().size(); ++id) {
    const Node& node = c.node(id);
    if (const auto* s = std::get_if<SumNode>(&node)) {
      Rational acc;
      for (const auto& wc : s->children) acc += wc.weight * value[wc.child];
      value[id] = std::move(acc);
    } else if (const auto* p = std::get_if<ProductNode>(&node)) {
      Rational acc(1);
      for (NodeId ch : p->children) acc *= value[ch];
      value[id] = std::move(acc);
    } else if (const auto* d = std::get_if<DivNode>(&node)) {
      if (value[d->den].is_zero()) throw divide_by_zero(id);
      value[id] = value[d->num] / value[d->den];
    } else if (const auto* v = std::get_if<VarNode>(&node)) {
      value[id] = leaf_value(v->ref, point);
    } else {
      value[id] = std::get<ConstNode>(node).value;
    }
  }
  return value[c.root()];
}

uint64_t evaluate_mod(const Circuit& c, const ModPoint& point, uint64_t prime) {
  auto leaf = [&](const VarRef& ref) -> uint64_t {
    const auto& side = ref.pol == Polarity::plain ? point.plain : point.bar;
    if (static_cast<std::size_t>(ref.index) > side.size())
      throw error("evaluation point does not cover variable x" + std::to_string(ref.index));
    return side[ref.index - 1] % prime;
  };
  std::vector<uint64_t> value(c.nodes().size(), 0);
  for (NodeId id = 0; id < c.nodes().size(); ++id) {
    const Node& node = c.node(id);
    if (const auto* s = std::get_if<SumNode>(&node)) {
      uint64_t acc = 0;
      for (const auto& wc : s->children)
        acc = modp::add(acc, modp::mul(wc.weight.residue(prime), value[wc.child], prime), prime);
      value[id] = acc;
    } else if (const auto* p = std::get_if<ProductNode>(&node)) {
      uint64_t acc = 1 % prime;
      for (NodeId ch : p->children) acc = modp::mul(acc, value[ch], prime);
      value[id] = acc;
    } else if (const auto* d = std::get_if<DivNode>(&node)) {
      if (value[d->den] == 0) throw divide_by_zero(id);
      value[id] = modp::mul(value[d->num], modp::inv(value[d->den], prime), prime);
    } else if (const auto* v = std::get_if<VarNode>(&node)) {
      value[id] = leaf(v->ref);
    } else {
      value[id] = std::get<ConstNode>(node).value.residue(prime);
    }
  }
  return value[c.root()];
}

/* --- structural helpers --------------------------------------------------- */

std::size_t count_var_leaves(const Circuit& c) {
  std::size_t k = 0;
  for (const Node& node : c.nodes())
    if (std::holds_alternative<VarNode>(node)) ++k;
  return k;
}

std::size_t count_sum_nodes(const Circuit& c) {
  std::size_t k = 0;
  for (const Node& node : c.nodes())
    if (std::holds_alternative<SumNode>(node)) ++k;
  return k;
}

std::size_t count_product_nodes(const Circuit& c) {
  std::size_t k = 0;
  for (const Node& node : c.nodes())
    if (std::holds_alternative<ProductNode>(node)) ++k;
  return k;
}

std::size_t count_sum_edges(const Circuit& c) {
  std::size_t k = 0;
  for (const Node& node : c.nodes())
    if (const auto* s = std::get_if<SumNode>(&node)) k += s->children.size();
  return k;
}

std::vector<long> degree_bounds(const Circuit& c) {
  std::vector<long> deg(c.nodes().size(), 0);
  for (NodeId id = 0; id < c.nodes().size(); ++id) {
    const Node& node = c.node(id);
    if (const auto* s = std::get_if<SumNode>(&node)) {
      long m = 0;
      for (const auto& wc : s->children) m = std::max(m, deg[wc.child]);
      deg[id] = m;
    } else if (const auto* p = std::get_if<ProductNode>(&node)) {
      long t = 0;
      for (NodeId ch : p->children) t += deg[ch];
      deg[id] = t;
    } else if (const auto* d = std::get_if<DivNode>(&node)) {
      deg[id] = deg[d->num];
    } else if (std::holds_alternative<VarNode>(node)) {
      deg[id] = 1;
    }
  }
  return deg;
}

long degree_bound(const Circuit& c) { return degree_bounds(c)[c.root()]; }

long var_degree_bound(const Circuit& c, int index) {
  std::vector<long> deg(c.nodes().size(), 0);
  for (NodeId id = 0; id < c.nodes().size(); ++id) {
    const Node& node = c.node(id);
    if (const auto* s = std::get_if<SumNode>(&node)) {
      long m = 0;
      for (const auto& wc : s->children) m = std::max(m, deg[wc.child]);
      deg[id] = m;
    } else if (const auto* p = std::get_if<ProductNode>(&node)) {
      long t = 0;
      for (NodeId ch : p->children) t += deg[ch];
      deg[id] = t;
    } else if (const auto* d = std::get_if<DivNode>(&node)) {
      deg[id] = deg[d->num];
    } else if (const auto* v = std::get_if<VarNode>(&node)) {
      deg[id] = v->ref.index == index ? 1 : 0;
    }
  }
  return deg[c.root()];
}

}  // namespace pcirc
