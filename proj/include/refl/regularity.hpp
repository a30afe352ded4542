#pragma once

#include <set>

#include "refl/catalog.hpp"
#include "refl/molien.hpp"

namespace refl {

struct regularity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Explicit certificate that zeta is regular: an element g with a regular
/// zeta-eigenvector.
struct RegularWitness {
  i64 element = -1;                       // index of g, witness in g*gamma
  std::vector<CycVector> eigenbasis;      // basis of V(g gamma, zeta)
  CycVector vector;                       // regular eigenvector, exact
};

struct RegularityReport {
  RootOfUnity zeta;
  bool criterion = false;                 // counting criterion
  bool multiset_criterion = false;        // multiset form of Prop. "regular"(2)
  std::optional<RegularWitness> witness;  // oracle result when requested
};

/// Counting criterion: |{i : eps_i zeta^{d_i} = 1}| == |{j : eps_j zeta^{d*_j} = 1}|.
bool is_regular_criterion(const ReflectionCoset& c, const RootOfUnity& zeta);

/// Multiset criterion: {(eps_i zeta^{d_i})^{-1}} over B equals
/// {eps_j zeta^{d*_j}} over B*; equivalent to the counting criterion.
bool is_regular_multiset(const ReflectionCoset& c, const RootOfUnity& zeta);

/// Brute-force oracle: scans g in G for a zeta-eigenspace of g*gamma not
/// contained in any reflecting hyperplane, and produces an exact witness
/// vector (lowest element index wins).
std::optional<RegularWitness> is_regular_oracle(const ReflectionCoset& c, const RootOfUnity& zeta);

/// The certified candidate universe: all zeta with zeta^L = 1, where L is the
/// lcm of gamma_order, d_i*ord(eps_i), |d*_j|*ord(eps*_j) and the coset
/// exponent.
i64 candidate_universe_lcm(const ReflectionCoset& c);

/// Per-candidate regularity over the certified universe; criterion and oracle
/// must agree on every candidate (throws otherwise).
std::map<RootOfUnity, bool> regular_zeta_map(const ReflectionCoset& c);

/// The set of multiplicative orders of regular eigenvalues.
std::set<i64> regular_orders(const ReflectionCoset& c);

/// Polynomial identity checks.
enum class IdentityKind { Sigma, SigmaDual, TwistPW, LM2, BetterLM2, ProductFormula };

struct IdentityReport {
  bool equal = false;
  UniPoly lhs, rhs;     // for the univariate identities
  std::string detail;   // diagnostics on failure
};

/// (sigma)/(sigma dual) take the Galois exponent k; the others ignore it.
IdentityReport verify_identity(const ReflectionCoset& c, IdentityKind kind, i64 k = 1);

/// Theorem OS2 as truncated bivariate series (exact in y, truncated in x at
/// N(M)): returns both sides coefficientwise.
struct OS2Report {
  bool equal = false;
  std::vector<TruncSeries> lhs, rhs;  // indexed by y-degree
};
OS2Report verify_os2(const ReflectionCoset& c, const ModuleRep& m);

/// All Galois exponents of the coset's full working conductor (conductor
/// extended by all eigenvalue orders of the coset).
std::vector<i64> galois_exponents(const ReflectionCoset& c);

/// Cor. eqlists: the multisets {eps_i zeta^{m_i}} for (G, gamma) and
/// (G_v, gamma) agree, zeta = theta_v(gamma), for M in {V, V*}.
bool eqlists_check(const ReflectionCoset& c, const CycVector& v);

/// Existence of a regular eigenvalue: either directly for G gamma, or after a
/// scalar shift z (Theorem "regexists" / Lemma "reduction").
struct ExistenceResult {
  bool direct = false;                 // found for G gamma itself
  RootOfUnity shift;                   // z with z gamma G regular (1 if direct)
  RootOfUnity zeta;                    // the regular eigenvalue found
  RegularWitness witness;
};
ExistenceResult existence_check(const ReflectionCoset& c);

/// Whether V is irreducible as a G-module (exact character norm).
bool is_irreducible_group_module(const ReflectionGroup& g);

/// Whether V is irreducible as a <G, gamma>-module.
bool is_irreducible_coset_module(const ReflectionCoset& c);

}  // namespace refl
