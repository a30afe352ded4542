#pragma once

#include "refl/molien.hpp"

namespace refl {

struct coinv_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Class function per graded piece H_i of the coinvariant algebra,
/// values[i][c] = Tr(class c | H_i); the top degree is N(V).
struct GradedCharacter {
  std::vector<std::vector<Cyclotomic>> values;
  i64 top_degree() const { return static_cast<i64>(values.size()) - 1; }
};

/// Graded character of the coinvariant algebra from the trace identity
/// sum_i Tr(g|H_i) t^i = prod(1 - t^{d_i}) / det(1 - t g|V*); verifies that
/// the characters sum to the regular character.
GradedCharacter coinvariant_character(const ReflectionCoset& c);

/// dim(+_{i = -k mod d} H_i) == dim(+_{i = -l mod d} H_i), d dividing a
/// degree.
bool eqdims_check(const ReflectionCoset& c, i64 d, i64 k, i64 l);

/// (1 - t^{d_i})/(1 - t) divides the Poincare polynomial of H, for every i.
bool poincare_divisibility(const ReflectionCoset& c);

/// Theorem "coinvariant induced" specialized to Gamma = <gamma> inside G:
/// +_{i = -k mod d} H_i == Ind_{<G_v, gamma>}^G ((H_v (x)~ theta_v) (x)
/// theta_v^k), compared as exact class functions. gamma is an element of G
/// with v a zeta-eigenvector, d = ord(zeta).
bool induction_check(const ReflectionCoset& c, i64 gamma_index, const CycVector& v, i64 k);

}  // namespace refl
