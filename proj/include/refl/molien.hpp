#pragma once

#include "refl/groups.hpp"
#include "refl/modulerep.hpp"

namespace refl {

struct molien_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One M-factor: exponent m with gamma-eigenvalue eps.
struct Factor {
  i64 m = 0;
  RootOfUnity eps;
  i64 d() const { return m + 1; }
  i64 dstar() const { return m - 1; }
  auto operator<=>(const Factor&) const = default;
};

/// The multiset of M-factors of a coset, sorted by (m, eps).
struct FactorSet {
  std::string module_tag;
  std::vector<Factor> items;

  i64 size() const { return static_cast<i64>(items.size()); }
  i64 exponent_sum() const;
  std::vector<i64> degrees() const;     // m + 1, sorted ascending
  std::vector<i64> codegrees() const;   // m - 1, sorted ascending

  /// indices with eps * zeta^(m + shift) == 1, i.e. U of the zeta^{-1}-shifted
  /// coset when shift encodes the degree convention (see call sites).
  std::vector<i64> u_indices() const;    // eps == 1
  std::vector<i64> u_sharp_indices() const;

  bool same_multiset(const FactorSet& o) const;
  std::string str() const;
};

/// Graded trace of gamma^j on (S (x) M*)^G through degree `bound`:
/// (1/|G|) sum_g Tr(g gamma^j | M*) / det(1 - x g gamma^j | V*).
TruncSeries molien_trace_series(const ReflectionCoset& c, const ModuleRep& m, i64 j, i64 bound);

/// The multiset of M-factors, by DFT over powers of gamma of the polynomial
/// parts of the twisted Molien series (truncation certified by Gutkin's N(M)).
FactorSet module_factors(const ReflectionCoset& c, const ModuleRep& m);

/// Factors of the defining module, with the Appendix product-formula
/// cross-check; cached per coset.
const FactorSet& v_factors(const ReflectionCoset& c);

/// Factors of the dual module (codegrees d* = m - 1); cached per coset.
const FactorSet& codegree_factors(const ReflectionCoset& c);

/// Degrees of G (untwisted data of the coset's group).
std::vector<i64> degrees_of(const ReflectionCoset& c);

/// N_H(M): sum of the xi_H-exponents of M* restricted to G_H.
i64 n_h_of_module(const ReflectionGroup& g, const ModuleRep& m, const Hyperplane& h);

/// N(M) computed two independent ways (Gutkin sum over hyperplanes and the
/// reflection closed formula); throws when the routes disagree. The third
/// route, sum of exponents from module_factors, is asserted there.
i64 n_of_module(const ReflectionGroup& g, const ModuleRep& m);

/// Psi_M = prod_H L_H^{N_H(M)}.
MultiPoly psi_polynomial(const ReflectionGroup& g, const ModuleRep& m);

/// Fake gamma-degree F_{M,gamma}(t) = sum_i eps_i t^{m_i}.
UniPoly fake_degree(const ReflectionCoset& c, const ModuleRep& m);

/// Verifies eps_i(z^{-1} gamma) = z_M z^{m_i} eps_i(gamma) by recomputing the
/// factors of the shifted coset.
bool scaling_check(const ReflectionCoset& c, const ModuleRep& m, const RootOfUnity& z);

/// Product formula: prod_{g in G} det(1 - T g gamma) = prod_i (1 - eps_i
/// T^{d_i})^{|G|/d_i}, checked as an exact multiset identity on linear
/// factors. Returns false (never throws) on mismatch.
bool product_formula_holds(const ReflectionCoset& c, const FactorSet& vf);

}  // namespace refl
