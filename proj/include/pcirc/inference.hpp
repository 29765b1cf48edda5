#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcirc/circuit.hpp"

namespace pcirc {

enum class VarState { one, zero, marg };

/// Per-variable evidence: assignment to 1 or 0, or marginalized out.
struct Query {
  std::vector<VarState> states;

  std::size_t assigned_one_count() const;
  std::size_t marg_count() const;

  static Query all_marg(int n) { return {std::vector<VarState>(n, VarState::marg)}; }
  /// Parses "1 0 ?" (space-separated symbols over {1, 0, ?}).
  static std::optional<Query> parse(const std::string& text);
  std::string str() const;
};

/// Marginal probability from a network circuit: one evaluation with
/// One -> (1,0), Zero -> (0,1), Marg -> (1,1).
Rational marginal_network(const Circuit& c, const Query& q);

/// Marginal from a likelihood circuit: one evaluation at 1/0/(1/2) scaled by
/// 2^#Marg.
Rational marginal_likelihood(const Circuit& c, const Query& q);

/// Marginal from a generating circuit: the leading coefficient of the
/// univariate restriction h(z), recovered from |One|+1 evaluations by exact
/// Lagrange interpolation at z = 0..|One|.
Rational marginal_generating(const Circuit& c, const Query& q);

/// Marginal from a Fourier circuit: routes through the generating semantics
/// with the O(s) leaf rewrite.
Rational marginal_fourier(const Circuit& c, const Query& q);

/// Dispatch on the circuit's tag (the four inference-ready semantics).
Rational marginal(const Circuit& c, const Query& q);

}  // namespace pcirc
