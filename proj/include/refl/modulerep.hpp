#pragma once

#include <memory>

#include "refl/linalg.hpp"

namespace refl {

/// Functorial description of a <G, gamma>-module built from the defining
/// representation V: evaluation turns the matrix of an element on V into its
/// matrix on M. Dual evaluates to inverse-transpose, Galois(k) applies the
/// field automorphism entrywise, Exterior/Tensor are the usual constructions.
class ModuleRep {
 public:
  static ModuleRep defining();
  static ModuleRep trivial();
  static ModuleRep dual(const ModuleRep& m);
  static ModuleRep galois(const ModuleRep& m, i64 k);
  static ModuleRep exterior(const ModuleRep& m, i64 p);
  static ModuleRep tensor(const ModuleRep& a, const ModuleRep& b);
  /// Explicit matrices keyed by the V-matrix dedup key.
  static ModuleRep explicit_table(std::map<std::string, CycMatrix> table, i64 dim);

  i64 dim(i64 r) const;
  CycMatrix act(const CycMatrix& g_on_v) const;
  /// Scalar by which z * Id_V acts on M; throws if the action is not scalar.
  Cyclotomic scalar_action(const Cyclotomic& z, i64 r) const;
  std::string tag() const;

 private:
  enum class Kind { V, Trivial, Dual, Galois, Exterior, Tensor, Table };
  ModuleRep(Kind k) : kind_(k) {}

  Kind kind_;
  std::shared_ptr<const ModuleRep> a_, b_;
  i64 param_ = 0;
  std::shared_ptr<const std::map<std::string, CycMatrix>> table_;
  i64 table_dim_ = 0;
};

}  // namespace refl
