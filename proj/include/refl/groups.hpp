#pragma once

#include <memory>
#include <mutex>
#include <optional>

#include "refl/linalg.hpp"

namespace refl {

struct group_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A reflecting hyperplane H with its pointwise stabilizer data.
struct Hyperplane {
  CycVector normal;               // covector L_H, first nonzero coordinate = 1
  std::vector<CycVector> basis;   // basis of H as a subspace of V
  i64 e_H = 0;                    // |G_H|
  i64 distinguished = -1;         // index of the generator of G_H with det = zeta_{e_H}
  std::vector<i64> fixers;        // element indices of G_H (including identity)
};

struct ConjClass {
  i64 rep = -1;
  std::vector<i64> members;
};

/// Fully enumerated finite reflection group in GL_r(Q(zeta_N)).
/// Elements are kept in canonical order (sorted by exact dedup key), so all
/// derived indices are deterministic and independent of generator order.
class ReflectionGroup {
 public:
  static constexpr i64 kDefaultCap = 2'000'000;

  static std::shared_ptr<const ReflectionGroup> enumerate(const std::vector<CycMatrix>& gens,
                                                          i64 cap = kDefaultCap);

  /// Rebuilds a group from an already-closed element list (cache loading);
  /// derived data is recomputed, closure is trusted.
  static std::shared_ptr<const ReflectionGroup> from_elements(std::vector<CycMatrix> elems,
                                                              const std::vector<CycMatrix>& gens);

  i64 dim() const { return dim_; }
  i64 order() const { return static_cast<i64>(elems_.size()); }
  i64 conductor() const { return conductor_; }

  const CycMatrix& element(i64 i) const { return elems_[i]; }
  const std::vector<CycMatrix>& elements() const { return elems_; }
  std::optional<i64> index_of(const CycMatrix& m) const;
  bool contains(const CycMatrix& m) const { return index_of(m).has_value(); }
  i64 identity_index() const { return id_index_; }
  i64 inverse_index(i64 i) const { return inv_[i]; }
  /// Index of element(a) * element(b).
  i64 product_index(i64 a, i64 b) const;

  const std::vector<i64>& generator_indices() const { return gen_indices_; }
  const std::vector<i64>& reflections() const { return reflections_; }
  const std::vector<Hyperplane>& arrangement() const { return arrangement_; }
  const std::vector<ConjClass>& classes() const { return classes_; }
  i64 class_of(i64 element) const { return class_of_[element]; }

  /// det(g) for each element, as exact roots of unity.
  const RootOfUnity& det_of(i64 i) const { return dets_[i]; }

  /// lcm of the orders of all elements.
  i64 exponent() const;

  /// Subgroup closure of a set of element indices (sorted index list).
  std::vector<i64> subgroup_closure(const std::vector<i64>& gens) const;

  /// Same group with all matrices re-embedded at a larger conductor.
  std::shared_ptr<const ReflectionGroup> embedded(i64 bigger) const;

 private:
  ReflectionGroup() = default;
  void build_derived();

  i64 dim_ = 0;
  i64 conductor_ = 1;
  std::vector<CycMatrix> elems_;
  std::map<std::string, i64> index_;
  std::vector<i64> inv_;
  std::vector<RootOfUnity> dets_;
  i64 id_index_ = -1;
  std::vector<i64> gen_indices_;
  std::vector<i64> reflections_;
  std::vector<Hyperplane> arrangement_;
  std::vector<ConjClass> classes_;
  std::vector<i64> class_of_;
  mutable std::optional<i64> exponent_;
  mutable std::mutex mutex_;
};

using GroupPtr = std::shared_ptr<const ReflectionGroup>;

struct ParabolicResult {
  GroupPtr group;                       // G_v, freshly enumerated
  std::vector<i64> member_indices;      // its elements as indices in G
  std::vector<i64> pointwise_stabilizer;  // C_G(v) = {g : g(v)=v} as indices in G
  std::vector<i64> fixing_reflections;  // reflections of G fixing v
  bool steinberg_equal;                 // C_G(v) == G_v as sets
};

/// Parabolic subgroup G_v generated by the reflections fixing v, plus the full
/// pointwise stabilizer for the Steinberg comparison.
ParabolicResult parabolic(const ReflectionGroup& g, const CycVector& v);

/// The scalar theta with m(v) = theta * v; throws if v is not an eigenvector.
Cyclotomic theta_v(const CycMatrix& m, const CycVector& v);

/// Per-element spectral data of a coset element g*gamma^j, computed once.
struct SpectralData {
  i64 order = 0;
  std::map<RootOfUnity, i64> eigen;
  RootOfUnity det;
  i64 fix_dim = 0;  // multiplicity of eigenvalue 1
};

/// Reflection coset (G, gamma): gamma of finite order normalizing G.
class ReflectionCoset {
 public:
  ReflectionCoset(GroupPtr g, const CycMatrix& gamma, i64 order_cap = 1 << 20);
  ReflectionCoset(const ReflectionCoset& o);
  ReflectionCoset& operator=(const ReflectionCoset& o);

  const ReflectionGroup& group() const { return *group_; }
  GroupPtr group_ptr() const { return group_; }
  const CycMatrix& gamma() const { return gamma_; }
  i64 gamma_order() const { return n_; }
  i64 conductor() const { return gamma_.conductor(); }
  i64 dim() const { return group_->dim(); }

  /// gamma^j for j mod gamma_order (cached).
  const CycMatrix& gamma_power(i64 j) const;

  /// Whether gamma lies in G (the coset is the group itself).
  bool untwisted() const { return untwisted_; }

  /// Coset (G, z^{-1} gamma).
  ReflectionCoset scalar_shift(const RootOfUnity& z) const;

  /// Spectral data of g*gamma (cached per element index).
  const SpectralData& spectral(i64 g_index) const;

  /// lcm of orders of all elements g*gamma, g in G.
  i64 coset_exponent() const;

 private:
  GroupPtr group_;
  CycMatrix gamma_;
  i64 n_ = 1;
  bool untwisted_ = false;
  std::vector<CycMatrix> gamma_pow_;
  mutable std::vector<std::optional<SpectralData>> spectral_;
  mutable std::optional<i64> coset_exponent_;
  mutable std::mutex mutex_;
};

/// Validates and builds a reflection coset; throws if gamma does not
/// normalize G or has no finite order within the cap.
ReflectionCoset coset_new(GroupPtr g, const CycMatrix& gamma, i64 order_cap = 1 << 20);

/// Conductor extension with a pinned cache, so repeated embeddings of the
/// same group share one instance (and one identity for downstream caches).
GroupPtr embedded_shared(const GroupPtr& g, i64 bigger);

/// Untwisted coset (gamma = identity).
ReflectionCoset untwisted_coset(GroupPtr g);

}  // namespace refl
