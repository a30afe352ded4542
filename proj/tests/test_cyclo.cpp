#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "refl/cyclo.hpp"

using namespace refl;

namespace {

Cyclotomic random_cyclo(std::mt19937_64& rng, i64 n) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  std::vector<Rational> c(euler_phi(n));
  for (auto& x : c) {
    x = Rational(num(rng), den(rng));
    x.canonicalize();
  }
  return Cyclotomic(n, std::move(c));
}

}  // namespace

TEST_CASE("power basis relations") {
  CHECK(Cyclotomic::root(4) * Cyclotomic::root(4) == Cyclotomic(-1));
  auto z3 = Cyclotomic::root(3);
  CHECK((Cyclotomic::one(3) + z3 + z3 * z3).is_zero());
  auto a = Cyclotomic::one(5) + Cyclotomic::root(5);
  CHECK(a.inverse() * a == Cyclotomic::one(5));
  CHECK_THROWS_AS(Cyclotomic::zero(3).inverse(), cyclo_error);
}

TEST_CASE("conductor discipline") {
  // cross-conductor arithmetic without embedding is an error
  CHECK_THROWS_AS(Cyclotomic::root(3) + Cyclotomic::root(4), cyclo_error);
  auto [a, b] = aligned(Cyclotomic::root(3), Cyclotomic::root(4));
  CHECK(a.conductor() == 12);
  CHECK((a * b) == Cyclotomic::root(12, 7));
}

TEST_CASE("field axioms on random triples, conductors 1..24") {
  std::mt19937_64 rng(20240811);
  for (i64 n = 1; n <= 24; ++n) {
    for (int rep = 0; rep < 8; ++rep) {
      Cyclotomic a = random_cyclo(rng, n), b = random_cyclo(rng, n), c = random_cyclo(rng, n);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a * b == b * a);
      if (!a.is_zero()) CHECK(a * a.inverse() == Cyclotomic::one(n));
    }
  }
}

TEST_CASE("galois automorphisms") {
  auto b = Cyclotomic::root(5) + Cyclotomic::root(5, 4);
  CHECK(galois_apply(1, b) == b);
  CHECK(galois_apply(4, b) == b);  // complex conjugation fixes the real value
  CHECK(galois_apply(2, b) == Cyclotomic::root(5, 2) + Cyclotomic::root(5, 3));
  CHECK(conj(Cyclotomic::root(5)) == Cyclotomic::root(5, 4));
  CHECK_THROWS_AS(galois_apply(5, Cyclotomic::root(5)), cyclo_error);
  // homomorphism property
  std::mt19937_64 rng(7);
  for (i64 n : {5, 8, 12}) {
    Cyclotomic a = random_cyclo(rng, n), c = random_cyclo(rng, n);
    for (i64 k = 1; k < n; ++k) {
      if (std::gcd(k, n) != 1) continue;
      CHECK(galois_apply(k, a * c) == galois_apply(k, a) * galois_apply(k, c));
      CHECK(galois_apply(k, a + c) == galois_apply(k, a) + galois_apply(k, c));
    }
  }
}

TEST_CASE("galois composition = index multiplication, N <= 24") {
  std::mt19937_64 rng(99);
  for (i64 n = 3; n <= 24; ++n) {
    Cyclotomic a = random_cyclo(rng, n);
    for (i64 k = 1; k < n; ++k) {
      if (std::gcd(k, n) != 1) continue;
      for (i64 k2 = 1; k2 < n; ++k2) {
        if (std::gcd(k2, n) != 1) continue;
        CHECK(galois_apply(k, galois_apply(k2, a)) == galois_apply(mod_pos(k * k2, n), a));
      }
    }
  }
}

TEST_CASE("root of unity recognition") {
  auto r = as_root_of_unity(Cyclotomic(-1));
  REQUIRE(r);
  CHECK(r->order() == 2);
  CHECK(r->exp() == 1);
  auto r2 = as_root_of_unity(Cyclotomic::root(6).pow(2));
  REQUIRE(r2);
  CHECK(r2->order() == 3);
  CHECK(r2->exp() == 1);
  CHECK(!as_root_of_unity(Cyclotomic(2)));
  CHECK(!as_root_of_unity(Cyclotomic::one(5) + Cyclotomic::root(5)));
  // left inverse of the conversion, over all mu_n with n | 24
  for (i64 n : divisors(24)) {
    for (i64 k = 0; k < n; ++k) {
      RootOfUnity z(n, k);
      auto back = as_root_of_unity(Cyclotomic::from_root(z, n));
      REQUIRE(back);
      CHECK(*back == z);
    }
  }
}

TEST_CASE("embedding") {
  CHECK(Cyclotomic::root(3).embedded(12) == Cyclotomic::root(12, 4));
  CHECK(Cyclotomic(5).embedded(7) == Cyclotomic::from_rational(Rational(5), 7));
  CHECK_THROWS_AS(Cyclotomic::root(4).embedded(6), cyclo_error);
  // embed commutes with arithmetic
  std::mt19937_64 rng(5);
  Cyclotomic a = random_cyclo(rng, 6), b = random_cyclo(rng, 6);
  CHECK((a * b).embedded(24) == a.embedded(24) * b.embedded(24));
  CHECK((a + b).embedded(24) == a.embedded(24) + b.embedded(24));
  // embed then recognize preserves (order, exponent) on all divisors of 24
  for (i64 n : divisors(24)) {
    for (i64 k = 0; k < n; ++k) {
      RootOfUnity z(n, k);
      auto lifted = as_root_of_unity(Cyclotomic::from_root(z, n).embedded(24));
      REQUIRE(lifted);
      CHECK(*lifted == z);
    }
  }
}

TEST_CASE("root of unity arithmetic and ordering") {
  RootOfUnity z6(6, 1), z3(3, 1);
  CHECK(z6 * z6 == z3);
  CHECK(z6.pow(6).is_one());
  CHECK(z6.inverse() * z6 == RootOfUnity::one());
  CHECK(RootOfUnity(12, 8) == RootOfUnity(3, 2));  // gcd-reduced canonical form
  CHECK(RootOfUnity(2, 1).str() == "-1");
  CHECK(RootOfUnity(3, 2).str() == "z3^2");
  CHECK(RootOfUnity(4, 1) < RootOfUnity(4, 3));
}
