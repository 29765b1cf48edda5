#pragma once

#include <optional>
#include <vector>

#include "pcirc/circuit.hpp"

/*!
  Division elimination for the four expensive transformation edges (1, 4, 7,
  10). The pipeline introduces division gadgets at the leaves, pulls every
  division up to a single root quotient A/B, translates inputs so B has
  constant term 1, expands A/B = A * sum_j (1-B)^j through homogeneous parts
  up to the target degree, and translates back. The result is division-free
  and equal, as a polynomial, to the original quotient.
*/

namespace pcirc {

enum class GadgetKind {
  /// x_i := x_i / (x_i + bar x_i), root scaled by prod_i (x_i + bar x_i).
  /// Turns a multilinear f into its evaluation form over indicator pairs
  /// (likelihood -> network, fourier -> fourier_ind).
  evidence_completion,
  /// x_i := x_i / bar x_i, root scaled by prod_i bar x_i. Turns a multilinear
  /// f into its coefficient form (generating -> network, pm -> fourier_ind).
  coefficient_extraction,
};

/// Leaf offsets for input translation, indexed per polarity (defaults 0).
struct LeafOffsets {
  std::vector<Rational> plain;
  std::vector<Rational> bar;

  static LeafOffsets zero(int n) {
    return {std::vector<Rational>(n, Rational(0)), std::vector<Rational>(n, Rational(0))};
  }
  /// The built-in shift for the gadget pipelines: x_i += 0, bar x_i += 1,
  /// where both gadget prefactors evaluate to 1.
  static LeafOffsets bar_ones(int n) {
    LeafOffsets o = zero(n);
    o.bar.assign(n, Rational(1));
    return o;
  }
  bool all_zero() const;
  const Rational& of(const VarRef& ref) const {
    return ref.pol == Polarity::plain ? plain[ref.index - 1] : bar[ref.index - 1];
  }
};

/// Replaces every plain leaf by the kind's division gadget and multiplies the
/// root by the prefactor over all n variables. Output is raw with divisions.
Circuit introduce_gadgets(const Circuit& c, GadgetKind kind);

/// Root quotient of a circuit with divisions: host's root is the single
/// division node, num/den its division-free operands.
struct DivisionSplit {
  Circuit host;
  NodeId num;
  NodeId den;

  Circuit numerator() const;    // standalone raw circuits
  Circuit denominator() const;
};

/// Moves all divisions up to one root division via (a/b)(c/d) = ac/bd and
/// a/b + c/d = (ad + bc)/(bd); k-ary sums fold pairwise left to right.
/// Purely syntactic: zero denominators only matter at evaluation time.
DivisionSplit pull_up(const Circuit& c);

/// Leaf translation: every leaf v becomes v + offset, so the result computes
/// input(x + offsets).
Circuit translate_inputs(const Circuit& c, const LeafOffsets& offsets);

/// Homogeneous parts H_0..H_d hosted in one circuit; part(i) computes the sum
/// of the degree-i monomials, and the host root computes their total.
struct HomStack {
  Circuit host;
  std::vector<NodeId> parts;

  Circuit part(std::size_t i) const;
};

HomStack homogenize(const Circuit& c, int degree);

struct EliminationOptions {
  /// Sum only the degree-d parts. Valid only when the true quotient is
  /// homogeneous of degree exactly d; requires shift = 0 and B(0) = 1.
  bool homogeneous_only = false;
};

/// Division-free circuit computing exactly A/B, assuming the quotient is a
/// polynomial of degree <= target_degree and B(shift) != 0 (else
/// singular_shift). Output is raw.
Circuit eliminate_division(const DivisionSplit& split, int target_degree,
                           const LeafOffsets& shift, const EliminationOptions& opts = {});

/// As above with a shift search: the built-in point, then all-ones, then up to
/// 32 seeded random rational points before failing with singular_shift.
Circuit eliminate_division_auto(const DivisionSplit& split, int target_degree,
                                uint64_t seed = 0x5eed);

/// One starred transformation edge (1, 4, 7, or 10): gadgets, pull-up, and
/// elimination at degree n with the built-in shift. Checks the source tag and
/// tags the result with the edge's target.
Circuit edge_transform(const Circuit& c, int edge);

/// Intermediates of the last stage, for --keep-intermediate dumps.
struct EdgePipelineArtifacts {
  std::optional<Circuit> gadget;  // raw, with divisions
  std::optional<Circuit> split_host;
  NodeId split_num = 0;
  NodeId split_den = 0;
};

Circuit edge_transform(const Circuit& c, int edge, EdgePipelineArtifacts* artifacts);

}  // namespace pcirc
