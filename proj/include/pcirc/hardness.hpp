#pragma once

#include <vector>

#include "pcirc/circuit.hpp"
#include "pcirc/matrix.hpp"
#include "pcirc/rational.hpp"

/*!
  Likelihood queries on generating circuits over 4-valued variables encode
  matrix permanents: any 0/1 matrix can be made column-sparse (at most three
  nonzero entries per column) without changing its permanent, and the product
  circuit prod_i sum_j M_ij x_j then has per-variable degree at most 3 with
  the permanent sitting in the coefficient of x_1 x_2 ... x_n. At demo scale
  that coefficient is recovered by brute-force expansion.
*/

namespace pcirc {

/// One sparsification step: two nonzero entries of `column` at rows `row_a`
/// and `row_b` moved into a fresh row/column pair. Indices are 0-based.
struct SparsifyStep {
  int column;
  int row_a;
  int row_b;
  int new_order;
};

using SparsifyTrace = std::vector<SparsifyStep>;

struct SparsifyResult {
  IntMatrix matrix;
  SparsifyTrace trace;
};

/// Permanent-preserving column sparsification. Columns are processed left to
/// right; each step moves the two smallest-index nonzero rows of the first
/// column holding more than three nonzeros. Output columns hold at most three
/// nonzeros and the order grows by one per step (at most order^2 steps).
SparsifyResult sparsify(const IntMatrix& m);

/// Re-applies a trace to the input matrix (must reproduce sparsify().matrix).
IntMatrix replay_trace(const IntMatrix& m, const SparsifyTrace& trace);

/// The product-of-sums circuit prod_i sum_j M_ij x_j, a tree-shaped formula of
/// size O(order^2), tagged categorical_generating k=4. Requires at most three
/// nonzeros per column (else degree_violation).
Circuit valiant_circuit(const IntMatrix& m);

/// Coefficient of x_1 x_2 ... x_n via brute-force expansion of the multilinear
/// part; at demo scale this stands in for the (hard) general likelihood query.
Rational coefficient_of_all_ones(const Circuit& c, std::size_t term_cap = std::size_t{1} << 20);

}  // namespace pcirc
