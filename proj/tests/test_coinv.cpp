#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "refl/coinv.hpp"
#include "refl/catalog.hpp"

using namespace refl;

TEST_CASE("graded character of the coinvariant algebra") {
  auto s3 = build_coset(CatalogKey::parse("G(1,1,3)"));
  GradedCharacter gc = coinvariant_character(s3);
  const auto& g = s3.group();
  i64 idc = g.class_of(g.identity_index());
  // dims 1, 2, 2, 1 from (1+t)(1+t+t^2)
  REQUIRE(gc.top_degree() == 3);
  i64 want[4] = {1, 2, 2, 1};
  for (i64 i = 0; i <= 3; ++i) CHECK(gc.values[i][idc] == Cyclotomic(want[i]));
  // degree 0: the trivial character
  for (size_t cl = 0; cl < g.classes().size(); ++cl)
    CHECK(gc.values[0][cl] == Cyclotomic(1));
  // top degree: one-dimensional, g -> det(g|V)^{-1}
  for (size_t cl = 0; cl < g.classes().size(); ++cl) {
    RootOfUnity d = g.det_of(g.classes()[cl].rep).inverse();
    CHECK(gc.values[3][cl] == Cyclotomic::from_root(d, lcm_i64(d.order(), g.conductor())));
  }
}

TEST_CASE("eqdims") {
  auto s3 = build_coset(CatalogKey::parse("G(1,1,3)"));
  // d = 3: residue sums 2, 2, 2
  CHECK(eqdims_check(s3, 3, 0, 1));
  CHECK(eqdims_check(s3, 3, 1, 2));
  CHECK(eqdims_check(s3, 2, 0, 1));
  CHECK(eqdims_check(s3, 1, 0, 5));
  CHECK_THROWS_AS(eqdims_check(s3, 5, 0, 1), coinv_error);  // 5 divides no degree
  CHECK(poincare_divisibility(s3));
  auto d4 = build_coset(CatalogKey::parse("D4"));
  for (i64 d : {1, 2, 3, 4, 6})
    for (i64 k = 0; k < d; ++k) CHECK(eqdims_check(d4, d, k, 0));
  CHECK(poincare_divisibility(d4));
}

TEST_CASE("eqdims for F4 at d = 12: all residue sums are 96") {
  auto f4 = build_coset(CatalogKey::parse("F4"));
  GradedCharacter gc = coinvariant_character(f4);
  i64 idc = f4.group().class_of(f4.group().identity_index());
  for (i64 k = 0; k < 12; ++k) {
    Cyclotomic s(0);
    for (i64 i = 0; i <= gc.top_degree(); ++i) {
      if (mod_pos(i + k, 12) != 0) continue;
      auto [a, b] = aligned(s, gc.values[i][idc]);
      s = a + b;
    }
    CHECK(s == Cyclotomic(96));
  }
}

TEST_CASE("induction: S_3, gamma a 3-cycle, regular eigenvector, k = 0") {
  auto s3 = build_coset(CatalogKey::parse("G(1,1,3)"));
  const auto& g = s3.group();
  // find a 3-cycle (element of order 3)
  i64 three_cycle = -1;
  for (i64 x = 0; x < g.order(); ++x)
    if (element_order(g.element(x)) == 3) three_cycle = x;
  REQUIRE(three_cycle >= 0);
  // zeta_3-eigenvector
  i64 big = lcm_i64(g.conductor(), 3);
  CycMatrix shifted = g.element(three_cycle).embedded(big) -
                      CycMatrix::scalar(3, Cyclotomic::root(big, big / 3));
  auto basis = kernel(shifted);
  REQUIRE(basis.size() == 1);
  auto par = parabolic(g, basis[0]);
  CHECK(par.group->order() == 1);  // the eigenvector is regular
  CHECK(induction_check(s3, three_cycle, basis[0], 0));
  CHECK(induction_check(s3, three_cycle, basis[0], 1));
  CHECK(induction_check(s3, three_cycle, basis[0], 2));
}

TEST_CASE("induction: d = 1 gives the regular character") {
  auto s3 = build_coset(CatalogKey::parse("G(1,1,3)"));
  const auto& g = s3.group();
  CycVector v = {Cyclotomic(2), Cyclotomic(3), Cyclotomic(5)};
  auto par = parabolic(g, v);
  REQUIRE(par.group->order() == 1);
  CHECK(induction_check(s3, g.identity_index(), v, 0));
}

TEST_CASE("induction: G(2,1,2) with gamma a reflection, d = 2") {
  // in B_2 every reflection's (-1)-eigenline lies on the perpendicular
  // hyperplane; the theorem needs no regularity, so use the eigenline as-is
  auto b2 = build_coset(CatalogKey::parse("G(2,1,2)"));
  const auto& g = b2.group();
  for (i64 s : g.reflections()) {
    i64 big = lcm_i64(g.conductor(), 2);
    CycMatrix shifted = g.element(s).embedded(big) + CycMatrix::identity(2, big);
    auto basis = kernel(shifted);
    REQUIRE(basis.size() == 1);
    CHECK(induction_check(b2, s, basis[0], 0));
    CHECK(induction_check(b2, s, basis[0], 1));
  }
}

TEST_CASE("induction across sample gammas of a catalog group") {
  auto c = build_coset(CatalogKey::parse("G(3,1,2)"));
  const auto& g = c.group();
  // identity with a generic vector
  CycVector v = {Cyclotomic(2), Cyclotomic(7)};
  REQUIRE(parabolic(g, v).group->order() == 1);
  CHECK(induction_check(c, g.identity_index(), v, 0));
  // every reflection class rep with an eigenvector sample
  for (const auto& cl : g.classes()) {
    i64 x = cl.rep;
    CycMatrix m = g.element(x);
    auto eig = eigen_multiset(m);
    // pick the eigenvalue of largest order
    RootOfUnity best;
    for (const auto& [w, mult] : eig)
      if (w.order() >= best.order()) best = w;
    i64 big = lcm_i64(g.conductor(), best.order());
    CycMatrix shifted = m.embedded(big) - CycMatrix::scalar(2, Cyclotomic::from_root(best, big));
    auto basis = kernel(shifted);
    REQUIRE(!basis.empty());
    CHECK(induction_check(c, x, basis[0], 0));
  }
}
