#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "pcirc/rational.hpp"

namespace pcirc {

using NodeId = uint32_t;

enum class Polarity { plain, bar };

/// Reference to an indeterminate: x_i (plain) or its indicator twin (bar).
/// Indices are 1-based.
struct VarRef {
  int index = 1;
  Polarity pol = Polarity::plain;

  friend bool operator==(const VarRef& a, const VarRef& b) {
    return a.index == b.index && a.pol == b.pol;
  }
};

inline VarRef plain_var(int i) { return {i, Polarity::plain}; }
inline VarRef bar_var(int i) { return {i, Polarity::bar}; }

enum class Semantics {
  likelihood,
  network,
  generating,
  likelihood_pm,
  fourier,
  fourier_ind,
  categorical_generating,
  raw,
};

struct SemanticsTag {
  Semantics kind = Semantics::raw;
  int categories = 0;  // k, only for categorical_generating (k >= 2)

  friend bool operator==(const SemanticsTag& a, const SemanticsTag& b) {
    return a.kind == b.kind && a.categories == b.categories;
  }

  /// The two indicator-pair encodings that admit bar leaves.
  bool two_polarity() const {
    return kind == Semantics::network || kind == Semantics::fourier_ind;
  }
  /// One of the six distribution encodings (everything except categorical/raw).
  bool distribution_tag() const {
    return kind != Semantics::raw && kind != Semantics::categorical_generating;
  }
};

inline SemanticsTag tag_likelihood() { return {Semantics::likelihood, 0}; }
inline SemanticsTag tag_network() { return {Semantics::network, 0}; }
inline SemanticsTag tag_generating() { return {Semantics::generating, 0}; }
inline SemanticsTag tag_likelihood_pm() { return {Semantics::likelihood_pm, 0}; }
inline SemanticsTag tag_fourier() { return {Semantics::fourier, 0}; }
inline SemanticsTag tag_fourier_ind() { return {Semantics::fourier_ind, 0}; }
inline SemanticsTag tag_categorical(int k) { return {Semantics::categorical_generating, k}; }
inline SemanticsTag tag_raw() { return {Semantics::raw, 0}; }

std::string semantics_name(const SemanticsTag& tag);

struct WeightedChild {
  Rational weight;
  NodeId child;

  friend bool operator==(const WeightedChild& a, const WeightedChild& b) {
    return a.child == b.child && a.weight == b.weight;
  }
};

struct SumNode {
  std::vector<WeightedChild> children;
};
struct ProductNode {
  std::vector<NodeId> children;
};
struct DivNode {
  NodeId num;
  NodeId den;
};
struct VarNode {
  VarRef ref;
};
struct ConstNode {
  Rational value;
};

using Node = std::variant<SumNode, ProductNode, DivNode, VarNode, ConstNode>;

bool node_equal(const Node& a, const Node& b);
std::size_t node_hash(const Node& n);

/// Set of variable indices (1-based), stored as a bitset.
class ScopeSet {
 public:
  ScopeSet() = default;

  void add(int index);
  bool contains(int index) const;
  void unite(const ScopeSet& other);
  bool empty() const;
  std::size_t count() const;

  bool operator==(const ScopeSet& other) const;
  bool subset_of(const ScopeSet& other) const;
  /// Smallest index present in both sets, or 0 if disjoint.
  int first_common(const ScopeSet& other) const;
  /// Ascending indices in `universe` that are missing from this set.
  std::vector<int> missing_from(const ScopeSet& universe) const;
  std::vector<int> members() const;
  std::string str() const;

 private:
  std::vector<uint64_t> words_;
  void trim();
};

ScopeSet full_scope(int n);

/// Immutable arithmetic-circuit DAG. Nodes are stored in topological order
/// (children strictly precede parents); `size` is the edge count.
class Circuit {
 public:
  int var_count() const { return n_; }
  const SemanticsTag& semantics() const { return semantics_; }
  bool divisions_allowed() const { return divisions_allowed_; }
  std::span<const Node> nodes() const { return nodes_; }
  const Node& node(NodeId id) const { return nodes_[id]; }
  NodeId root() const { return root_; }
  std::size_t size() const { return size_; }

  const std::vector<ScopeSet>& scopes() const { return scopes_; }
  const ScopeSet& scope(NodeId id) const { return scopes_[id]; }
  const ScopeSet& root_scope() const { return scopes_[root_]; }

  bool has_divisions() const { return div_count_ > 0; }
  std::size_t div_count() const { return div_count_; }

 private:
  friend Circuit build_circuit(std::vector<Node>, NodeId, int, SemanticsTag, bool);
  Circuit() = default;

  int n_ = 0;
  std::vector<Node> nodes_;
  NodeId root_ = 0;
  SemanticsTag semantics_;
  bool divisions_allowed_ = false;
  std::size_t size_ = 0;
  std::size_t div_count_ = 0;
  std::vector<ScopeSet> scopes_;
};

/// Validates and freezes a node table into a Circuit. Children must precede
/// their parents; unreachable nodes are dropped and ids are renumbered densely.
/// Size and per-node scopes are computed here and cached.
Circuit build_circuit(std::vector<Node> nodes, NodeId root, int n, SemanticsTag semantics,
                      bool divisions_allowed = false);

struct BuildOptions {
  bool hash_cons = true;  // deduplicate structurally identical node bodies
};

/// Incremental construction with optional structural hash-consing.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(BuildOptions opts = {}) : opts_(opts) {}

  NodeId constant(Rational value);
  NodeId var(VarRef ref);
  NodeId var(int index, Polarity pol = Polarity::plain) { return var(VarRef{index, pol}); }
  NodeId sum(std::vector<WeightedChild> children);
  NodeId product(std::vector<NodeId> children);
  NodeId div(NodeId num, NodeId den);

  const Node& body(NodeId id) const { return nodes_[id]; }
  std::size_t node_count() const { return nodes_.size(); }

  Circuit finish(NodeId root, int n, SemanticsTag semantics, bool divisions_allowed = false);

 private:
  NodeId intern(Node node);
  BuildOptions opts_;
  std::vector<Node> nodes_;
  std::unordered_map<std::size_t, std::vector<NodeId>> dedup_;
};

/// Same node table under a different tag (re-validates polarity/division rules).
Circuit retag(const Circuit& c, SemanticsTag tag);

/// Copies the sub-DAG under `src_root` into `dst`, applying `leaf_map` to every
/// variable leaf (identity when omitted). Returns the new root id.
class Rebuilder {
 public:
  using LeafMap = std::function<NodeId(CircuitBuilder&, const VarRef&)>;

  Rebuilder(const Circuit& src, CircuitBuilder& dst, LeafMap leaf_map = nullptr)
      : src_(src), dst_(dst), leaf_map_(std::move(leaf_map)) {}

  NodeId copy(NodeId src_root);

 private:
  const Circuit& src_;
  CircuitBuilder& dst_;
  LeafMap leaf_map_;
  std::unordered_map<NodeId, NodeId> memo_;
};

/// Extracts the sub-DAG under `root` as a standalone circuit.
Circuit extract_subcircuit(const Circuit& c, NodeId root, SemanticsTag tag,
                           bool divisions_allowed = false);

/* --- evaluation ------------------------------------------------------- */

struct EvalPoint {
  std::vector<Rational> plain;
  std::vector<Rational> bar;

  static EvalPoint zeros(int n) {
    return {std::vector<Rational>(n, Rational(0)), std::vector<Rational>(n, Rational(0))};
  }
};

/// One bottom-up pass; exact. Throws divide_by_zero when a division node's
/// denominator evaluates to 0 at the point.
Rational evaluate(const Circuit& c, const EvalPoint& point);

struct ModPoint {
  std::vector<uint64_t> plain;
  std::vector<uint64_t> bar;
};

/// Same pass with all arithmetic mod `prime`; weights map via modular inverse.
uint64_t evaluate_mod(const Circuit& c, const ModPoint& point, uint64_t prime = identity_prime);

/* --- structural helpers ------------------------------------------------ */

std::size_t count_var_leaves(const Circuit& c);
std::size_t count_sum_nodes(const Circuit& c);
std::size_t count_product_nodes(const Circuit& c);
std::size_t count_sum_edges(const Circuit& c);

/// Per-node upper bound on total degree (divisions take the numerator bound).
std::vector<long> degree_bounds(const Circuit& c);
long degree_bound(const Circuit& c);

/// Upper bound on the degree of variable i (either polarity) at the root.
long var_degree_bound(const Circuit& c, int index);

}  // namespace pcirc
