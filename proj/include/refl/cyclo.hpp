#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "refl/numtheory.hpp"

namespace refl {

using Rational = mpq_class;

struct cyclo_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A root of unity zeta_order^exp in canonical form: 0 <= exp < order and
/// gcd(exp, order) = 1, so `order` is the exact multiplicative order.
class RootOfUnity {
 public:
  RootOfUnity() : order_(1), exp_(0) {}
  RootOfUnity(i64 n, i64 k);  // value zeta_n^k, reduced

  i64 order() const { return order_; }
  i64 exp() const { return exp_; }

  bool is_one() const { return order_ == 1; }
  RootOfUnity inverse() const { return RootOfUnity(order_, order_ - exp_); }
  RootOfUnity pow(i64 k) const;
  friend RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b);

  bool operator==(const RootOfUnity& o) const = default;
  // canonical order: by (order, exp)
  auto operator<=>(const RootOfUnity& o) const = default;

  std::string str() const;  // "1", "-1" or "z<n>^<k>"

  static RootOfUnity one() { return RootOfUnity(); }
  static RootOfUnity minus_one() { return RootOfUnity(2, 1); }

 private:
  i64 order_;
  i64 exp_;
};

/// Exact element of Q(zeta_N), stored as phi(N) rational coordinates in the
/// power basis 1, zeta_N, ..., zeta_N^{phi(N)-1}, reduced mod the N-th
/// cyclotomic polynomial. Representation is canonical: two values at the same
/// conductor are equal iff their coefficient vectors coincide.
class Cyclotomic {
 public:
  Cyclotomic() : n_(1), c_(1, Rational(0)) {}
  explicit Cyclotomic(const Rational& r) : n_(1), c_(1, r) { c_[0].canonicalize(); }
  explicit Cyclotomic(i64 r) : n_(1), c_(1, Rational(r)) {}
  Cyclotomic(i64 conductor, std::vector<Rational> coeffs);

  static Cyclotomic zero(i64 n = 1);
  static Cyclotomic one(i64 n = 1);
  static Cyclotomic from_rational(const Rational& r, i64 n = 1);
  /// zeta_n^k at conductor n (or a given multiple).
  static Cyclotomic root(i64 n, i64 k = 1);
  static Cyclotomic from_root(const RootOfUnity& z, i64 conductor);

  i64 conductor() const { return n_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;
  Rational rational_part() const;  // requires is_rational()
  bool is_integer() const;

  Cyclotomic embedded(i64 bigger) const;  // N | bigger

  friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b);
  Cyclotomic operator-() const;
  Cyclotomic& operator+=(const Cyclotomic& b);
  Cyclotomic& operator-=(const Cyclotomic& b);
  Cyclotomic& operator*=(const Cyclotomic& b);

  Cyclotomic inverse() const;
  Cyclotomic pow(i64 k) const;
  Cyclotomic scaled(const Rational& r) const;

  /// Semantic equality (aligns conductors if they differ).
  bool operator==(const Cyclotomic& o) const;
  bool operator!=(const Cyclotomic& o) const { return !(*this == o); }

  std::string str() const;

 private:
  void reduce_raw(std::vector<Rational>& raw) const;  // raw indexed by power < n_

  i64 n_;
  std::vector<Rational> c_;
};

/// Galois automorphism zeta_N -> zeta_N^k (gcd(k, N) = 1).
Cyclotomic galois_apply(i64 k, const Cyclotomic& a);

/// Complex conjugation (k = N - 1).
Cyclotomic conj(const Cyclotomic& a);

/// Exact recognition: returns (order, exp) iff `a` is a root of unity.
std::optional<RootOfUnity> as_root_of_unity(const Cyclotomic& a);

/// Embeds both arguments into the lcm of their conductors.
std::pair<Cyclotomic, Cyclotomic> aligned(const Cyclotomic& a, const Cyclotomic& b);

/// Binary minimum conductor for zeta_n (n itself).
const std::vector<mpz_class>& cyclotomic_polynomial(i64 n);

}  // namespace refl
