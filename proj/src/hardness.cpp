#include "pcirc/hardness.hpp"

#include "pcirc/errors.hpp"
#include "pcirc/oracle.hpp"

namespace pcirc {

namespace {

IntMatrix apply_step(const IntMatrix& m, int t, int a, int b) {
  const int n = m.order;
  IntMatrix out = IntMatrix::zero(n + 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at(i, j) = m.at(i, j);
  out.at(a, t) = 0;
  out.at(b, t) = 0;
  out.at(n, t) = 1;      // new row points back at the targeted column
  out.at(n, n) = 1;      // diagonal entry
  out.at(a, n) = 1;      // the two moved entries land in the new column
  out.at(b, n) = 1;
  return out;
}

}  // namespace

SparsifyResult sparsify(const IntMatrix& input) {
  for (uint8_t e : input.entries)
    if (e > 1) throw error("sparsify expects a 0/1 matrix");
  SparsifyResult result{input, {}};
  for (;;) {
    IntMatrix& m = result.matrix;
    int target = -1;
    for (int t = 0; t < m.order && target < 0; ++t)
      if (m.column_count(t) > 3) target = t;
    if (target < 0) return result;
    int a = -1, b = -1;
    for (int i = 0; i < m.order && b < 0; ++i) {
      if (!m.at(i, target)) continue;
      if (a < 0)
        a = i;
      else
        b = i;
    }
    result.matrix = apply_step(m, target, a, b);
    result.trace.push_back({target, a, b, result.matrix.order});
  }
}

IntMatrix replay_trace(const IntMatrix& input, const SparsifyTrace& trace) {
  IntMatrix m = input;
  for (const SparsifyStep& step : trace) {
    if (step.column >= m.order || step.row_a >= m.order || step.row_b >= m.order ||
        step.row_a == step.row_b)
      throw error("trace step out of range");
    if (!m.at(step.row_a, step.column) || !m.at(step.row_b, step.column))
      throw error("trace step moves zero entries");
    m = apply_step(m, step.column, step.row_a, step.row_b);
    if (m.order != step.new_order) throw error("trace order mismatch");
  }
  return m;
}

Circuit valiant_circuit(const IntMatrix& m) {
  const int n = m.order;
  for (int t = 0; t < n; ++t)
    if (m.column_count(t) > 3)
      throw degree_violation("column " + std::to_string(t) + " has " +
                             std::to_string(m.column_count(t)) +
                             " nonzero entries; at most 3 allowed for k=4");
  // a formula: plain tree, no subterm sharing
  CircuitBuilder b(BuildOptions{.hash_cons = false});
  std::vector<NodeId> rows;
  rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<WeightedChild> terms;
    for (int j = 0; j < n; ++j)
      if (m.at(i, j)) terms.push_back({Rational(1), b.var(plain_var(j + 1))});
    rows.push_back(terms.empty() ? b.constant(Rational(0)) : b.sum(std::move(terms)));
  }
  NodeId root = rows.empty() ? b.constant(Rational(1)) : b.product(std::move(rows));
  return b.finish(root, n, tag_categorical(4));
}

Rational coefficient_of_all_ones(const Circuit& c, std::size_t term_cap) {
  const int n = c.var_count();
  if (n > 63) throw error("coefficient extraction supports at most 63 variables");
  SparsePoly p = oracle::expand_multilinear_part(c, term_cap);
  uint64_t all = n == 0 ? 0 : (uint64_t{1} << n) - 1;
  return p.coefficient(Monomial::from_masks(all, 0));
}

}  // namespace pcirc
