#pragma once

#include "refl/regularity.hpp"

namespace refl {

struct harmonics_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Element of S (x) M*: component polynomials in the dual basis of M.
using PolyVec = std::vector<MultiPoly>;

/// Basis of (S_d (x) M*)^G by Reynolds averaging; its size equals the
/// degree-d Molien coefficient.
std::vector<PolyVec> invariant_space(const ReflectionGroup& g, const ModuleRep& m, i64 d);

/// Degree-d Molien coefficient dim (S_d (x) M*)^G.
i64 invariant_dimension(const ReflectionGroup& g, const ModuleRep& m, i64 d);

struct BasicInvariant {
  MultiPoly p;
  i64 degree = 0;
  RootOfUnity eps;  // gamma(P) = eps P
};

struct BasicInvariants {
  std::vector<BasicInvariant> items;  // sorted by (degree, eps)
  std::vector<i64> degrees() const;
};

/// Homogeneous basic invariants P_i chosen as gamma-eigenvectors degree by
/// degree; checked against the V-factors and the Jacobian criterion
/// (det(dP_i/dX_j) is a nonzero multiple of Psi_V).
const BasicInvariants& basic_invariants(const ReflectionCoset& c);

struct HarmonicElement {
  PolyVec components;
  i64 degree = 0;
  RootOfUnity eps;
};

struct HarmonicBasis {
  std::string module_tag;
  std::vector<HarmonicElement> items;  // sorted by (degree, eps)
};

/// Homogeneous gamma-eigen S^G-basis of (S (x) M*)^G, built degree by degree
/// modulo S^G_+ times the part already found; the (m, eps) multiset must
/// equal molien's module_factors (hard cross-check).
HarmonicBasis harmonic_module_basis(const ReflectionCoset& c, const ModuleRep& m);

/// Gutkin: the wedge of the basis elements equals lambda * Psi_M (x)
/// y_1^...^y_m; returns the nonzero lambda.
Cyclotomic gutkin_check(const ReflectionCoset& c, const ModuleRep& m);

struct DiscMatrixResult {
  std::vector<std::vector<MultiPoly>> entries;  // rows B(M), cols B(M*)
  MultiPoly delta;                              // det, = Delta_M
  Cyclotomic psi_ratio;                         // delta / (Psi_M Psi_{M*})
};

/// Pairing matrix with the eq. checks gamma(M_ij) = eps_i eps_j M_ij and
/// det = Delta_M = lambda Psi_M Psi_{M*}.
DiscMatrixResult disc_matrix(const ReflectionCoset& c, const ModuleRep& m);

/// The discriminant Delta = det of the V-pairing matrix (cached per coset).
const MultiPoly& discriminant(const ReflectionCoset& c);

/// Exact representation of an invariant f as a polynomial in the P_i
/// (variables of the result indexed like basics.items).
MultiPoly express_in_basics(const MultiPoly& f, const BasicInvariants& basics);

/// Prop. "bessis": zeta regular iff Delta not in the ideal generated by the
/// P_i with eps_i zeta^{d_i} != 1. Cross-checked against the counting
/// criterion and the oracle (throws on disagreement).
bool ideal_regularity(const ReflectionCoset& c, const RootOfUnity& zeta);

struct WellGenReport {
  bool by_degrees = false;        // d_i + d_i^* = d_r for all i
  bool by_search = false;         // some r reflections generate
  i64 min_generating_size = 0;    // smallest generating set of reflections
  bool disc_reduction_ok = false; // M = P_r C mod I_0, C constant nonsingular,
                                  // block diagonal by degree
  bool sigma_matching_ok = false; // eps*_{sigma(i)} = eps_i^{-1} eps_r
  RootOfUnity coxeter_zeta;       // zeta with zeta^{d_r} = eps_r^{-1}
  bool coxeter_zeta_regular = false;
  bool monic_ok = false;          // Delta monic in P_r
  bool multiset_ok = false;       // Cor. "monicreg" multiset equality
};

/// Well-generation decided both by the degree condition and by exhaustive
/// search over reflection subsets, plus the discriminant-matrix structure
/// theory for the well-generated case.
WellGenReport wellgen_structure(const ReflectionCoset& c);

}  // namespace refl
