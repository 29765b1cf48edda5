#pragma once

#include <optional>

#include "pcirc/circuit.hpp"

/*!
  Structural analysis and the fast paths it unlocks: decomposable circuits
  reach the two-polarity encodings by scope-gap smoothing instead of division
  elimination, and smooth decomposable likelihood circuits reach the Fourier
  encoding by rewriting leaves alone.
*/

namespace pcirc {

struct DecomposabilityWitness {
  NodeId node;   // offending product
  int variable;  // index shared between two children
};

/// True iff every product node's children have pairwise disjoint scopes.
std::optional<DecomposabilityWitness> decomposability_witness(const Circuit& c);
bool is_decomposable(const Circuit& c);

struct SmoothnessWitness {
  NodeId node;  // offending sum
};

/// True iff every sum node's children have equal scopes.
std::optional<SmoothnessWitness> smoothness_witness(const Circuit& c);
bool is_smooth(const Circuit& c);

enum class SmoothGadget {
  indicator_pair,  // x_i + bar x_i: likelihood -> network, fourier -> fourier_ind
  bar_only,        // bar x_i: generating -> network, likelihood_pm -> fourier_ind
};

/// Scope-gap completion for decomposable circuits: every sum edge whose child
/// misses part of the sum's scope is multiplied by the gap gadgets, and the
/// root by gadgets for variables missing from its scope. Variable leaves stay
/// untouched. Output is smooth, decomposable, and carries the two-polarity
/// target tag. Size grows by O(n) per sum edge.
Circuit smooth_complete(const Circuit& c, SmoothGadget gadget);

/// Inserts weight-1 sums between product nodes and their leaf children; the
/// leaf-only Fourier rewrite assumes this shape.
Circuit normalize_for_fourier(const Circuit& c);

/// Fourier transform of a decomposable, smooth likelihood circuit by leaf
/// rewriting: x_i := (1 - 2 x_i)/2 and, per singleton-scope sum, constant
/// children k := k (1 - x_i); variables missing from the root scope contribute
/// (1 - x_i) factors at the root. The sum/product skeleton of the normalized
/// input is preserved. Constant children of sums whose scope is neither empty
/// nor a singleton cannot be scoped and raise unscoped_constant.
Circuit fourier_leaves(const Circuit& c);

}  // namespace pcirc
