#pragma once

#include <optional>

#include "pcirc/circuit.hpp"
#include "pcirc/matrix.hpp"
#include "pcirc/poly.hpp"

/*!
  Ground-truth brute-force engine. Everything here is definition-level and
  independent of the transformation passes, so it can referee them: expansion
  into the monomial basis, distribution extraction per semantics, the Fourier
  transform computed from its defining sum, polynomial identity testing, and
  exact permanents.
*/

namespace pcirc::oracle {

inline constexpr std::size_t default_term_cap = std::size_t{1} << 20;

/// Expands a division-free circuit into its canonical sparse polynomial.
SparsePoly expand(const Circuit& c, std::size_t term_cap = default_term_cap);

/// Multilinear part of the expansion: terms that acquire any exponent >= 2 are
/// pruned as they appear. Agrees with expand() on multilinear circuits and is
/// the right instrument for extracting coefficients of multilinear monomials.
SparsePoly expand_multilinear_part(const Circuit& c, std::size_t term_cap = default_term_cap);

/// The polynomial a distribution is encoded as, per semantics tag.
SparsePoly tag_polynomial(const DistTable& d, const SemanticsTag& tag);

/// Fourier transform of the mass function, expanded in the monomial basis.
SparsePoly fourier_of(const DistTable& d);

/// Fourier coefficients: spectrum[mask] is the transform evaluated at the
/// indicator point of `mask`.
std::vector<Rational> spectrum_of(const DistTable& d);

/// Recovers the distribution a tagged circuit encodes. Throws
/// semantics_mismatch for raw/categorical tags and not_a_distribution when the
/// recovered table has negative mass or does not sum to 1.
DistTable dist_from(const Circuit& c);

/// dist_from without the distribution-validity check (used for reporting).
DistTable extract_table(const Circuit& c);

enum class TermGrouping { flat, balanced };

/// Flat circuit for a sparse polynomial: one weighted sum of monomial products.
Circuit poly_to_circuit(const SparsePoly& p, int n, const SemanticsTag& tag,
                        TermGrouping grouping = TermGrouping::flat);

/// Flat tagged circuit built directly from the defining polynomial of `tag`.
Circuit encode(const DistTable& d, const SemanticsTag& tag,
               TermGrouping grouping = TermGrouping::flat);

/* --- polynomial identity ------------------------------------------------- */

struct ExactMode {
  std::size_t term_cap = default_term_cap;
};

struct ProbabilisticMode {
  int trials = 8;
  uint64_t seed = 0x5eed;
  uint64_t prime = identity_prime;
};

struct IdentityResult {
  bool equal = false;
  std::optional<Monomial> differing_monomial;  // exact mode
  std::optional<ModPoint> counterexample;      // probabilistic mode
  explicit operator bool() const { return equal; }
};

IdentityResult identical(const Circuit& a, const Circuit& b, const ExactMode& mode);
IdentityResult identical(const Circuit& a, const Circuit& b, const ProbabilisticMode& mode);

/* --- permanent ------------------------------------------------------------ */

/// Exact permanent of a 0/1 matrix. Lexicographic permutation enumeration for
/// order <= 12, Gray-code Ryser for order <= 20.
Integer permanent(const IntMatrix& m);

}  // namespace pcirc::oracle
