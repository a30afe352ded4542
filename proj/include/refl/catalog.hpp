#pragma once

#include <functional>

#include "refl/molien.hpp"

namespace refl {

struct catalog_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Keys for the built-in cosets: the imprimitive family e'G(de,e,r) plus the
/// named exceptional/Coxeterrows.
struct CatalogKey {
  enum class Family {
    Imprimitive,   // e'G(de,e,r): gamma = diag(zeta_{e'd}, 1, ..., 1)
    UntwistedImprimitive,  // gamma = identity
    G333_4,        // order-4 gamma on G(3,3,3)
    G333_2,        // its square
    G422_3,        // order-3 twist of G(4,2,2)
    G5_2,          // G_5 with gamma = diag(1,-1)
    G7_2,          // G_7 with gamma an order-2 reflection of G_15
    D4_3,          // triality
    F4_2,          // graph automorphism
    F4_1,          // untwisted F_4
    D4_1,          // untwisted D_4 (same matrices as G(2,2,4))
  };

  Family family = Family::UntwistedImprimitive;
  i64 d = 1, e = 1, r = 1, eprime = 1;

  static CatalogKey parse(const std::string& text);
  std::string str() const;
  bool operator<(const CatalogKey& o) const;
};

/// Builds (and self-checks) the coset for a key. Groups are cached per
/// parameter set; repeated builds share the enumeration.
ReflectionCoset build_coset(const CatalogKey& key, i64 cap = ReflectionGroup::kDefaultCap);

/// Optional on-disk cache of enumerated element lists (versioned JSON files
/// keyed by the group token). Empty string disables.
void set_group_cache_dir(const std::string& dir);

/// All imprimitive keys with (de)^r r!/e <= max_order (bounded sweep:
/// de <= max_de, r <= max_rank keeps the key list finite).
std::vector<CatalogKey> family_sweep(i64 max_order, i64 max_de = 12, i64 max_rank = 6);

/// The seven named rows of the concluding table.
std::vector<CatalogKey> named_rows();

/// Expected row data from the paper's in-text values; regular_pred evaluates
/// the row's regularity condition for a candidate eigenvalue.
struct ExpectedRow {
  std::vector<Factor> degrees;     // (m = d-1, eps), sorted like FactorSet
  std::vector<Factor> codegrees;   // (m = d*+1, eps), sorted like FactorSet
  std::function<bool(const RootOfUnity&)> regular_pred;
  std::string regular_desc;
  std::vector<std::string> flags;  // known table-vs-text discrepancies etc.
};

std::optional<ExpectedRow> expected_row(const CatalogKey& key);

}  // namespace refl
