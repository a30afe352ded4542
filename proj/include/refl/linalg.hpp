#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "refl/cyclo.hpp"

namespace refl {

struct linalg_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using CycVector = std::vector<Cyclotomic>;

/// Dense matrix over Q(zeta_N); all entries share the conductor.
class CycMatrix {
 public:
  CycMatrix() : rows_(0), cols_(0), n_(1) {}
  CycMatrix(i64 rows, i64 cols, i64 conductor = 1);
  static CycMatrix identity(i64 n, i64 conductor = 1);
  static CycMatrix from_rows(const std::vector<CycVector>& rows);
  static CycMatrix scalar(i64 n, const Cyclotomic& c);

  i64 rows() const { return rows_; }
  i64 cols() const { return cols_; }
  i64 conductor() const { return n_; }

  const Cyclotomic& at(i64 i, i64 j) const { return a_[i * cols_ + j]; }
  void set(i64 i, i64 j, const Cyclotomic& v);

  CycMatrix embedded(i64 bigger) const;

  friend CycMatrix operator*(const CycMatrix& a, const CycMatrix& b);
  friend CycMatrix operator+(const CycMatrix& a, const CycMatrix& b);
  friend CycMatrix operator-(const CycMatrix& a, const CycMatrix& b);
  CycMatrix scaled(const Cyclotomic& c) const;

  CycMatrix transpose() const;
  CycMatrix inverse() const;
  CycMatrix pow(i64 k) const;
  Cyclotomic trace() const;

  bool is_identity() const;
  bool is_zero() const;
  std::optional<Cyclotomic> as_scalar() const;

  bool operator==(const CycMatrix& o) const;

  /// Canonical dedup key at this conductor (exact, collision-free).
  std::string key() const;
  std::string str() const;

 private:
  i64 rows_, cols_, n_;
  std::vector<Cyclotomic> a_;
};

CycVector mat_vec(const CycMatrix& m, const CycVector& v);
std::pair<CycMatrix, CycMatrix> aligned(const CycMatrix& a, const CycMatrix& b);

/// Exact determinant by fraction-free (Bareiss) elimination.
Cyclotomic det(const CycMatrix& m);

/// Row rank by Gaussian elimination.
i64 rank(const CycMatrix& m);

/// Basis of the right kernel {v : Mv = 0}; empty iff injective.
std::vector<CycVector> kernel(const CycMatrix& m);

/// Polynomials over Q(zeta), ascending coefficients, trailing zeros trimmed.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Cyclotomic> coeffs) : c_(std::move(coeffs)) { trim(); }
  static UniPoly zero() { return UniPoly(); }
  static UniPoly constant(const Cyclotomic& c);
  static UniPoly monomial(const Cyclotomic& c, i64 deg);

  i64 degree() const { return static_cast<i64>(c_.size()) - 1; }  // -1 for zero
  Cyclotomic coeff(i64 i) const;
  const std::vector<Cyclotomic>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  UniPoly scaled(const Cyclotomic& c) const;
  Cyclotomic eval(const Cyclotomic& x) const;

  bool operator==(const UniPoly& o) const;
  std::string str(const std::string& var = "T") const;

 private:
  void trim();
  std::vector<Cyclotomic> c_;
};

/// Truncated power series: coefficients 0..bound, operations never read beyond.
class TruncSeries {
 public:
  TruncSeries(i64 bound, Cyclotomic c0 = Cyclotomic(0));
  static TruncSeries from_poly(const UniPoly& p, i64 bound);

  i64 bound() const { return static_cast<i64>(c_.size()) - 1; }
  const Cyclotomic& coeff(i64 i) const { return c_[i]; }
  void set_coeff(i64 i, const Cyclotomic& v) { c_[i] = v; }

  friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b);
  friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b);
  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
  TruncSeries& operator+=(const TruncSeries& b);
  TruncSeries scaled(const Cyclotomic& c) const;
  TruncSeries invert() const;  // constant term must be nonzero
  TruncSeries mul_poly(const UniPoly& p) const;

  /// The polynomial part if all coefficients above `deg` vanish.
  std::optional<UniPoly> as_polynomial(i64 deg) const;

  bool operator==(const TruncSeries& o) const;
  std::string str() const;

 private:
  std::vector<Cyclotomic> c_;
};

/// det(1 - T*M): reverse characteristic polynomial, computed exactly via
/// Newton's identities from power traces.
UniPoly char_series(const CycMatrix& m);

/// Least n >= 1 with M^n = 1; throws if the cap is exceeded.
i64 element_order(const CycMatrix& m, i64 cap = 1 << 20);

/// Eigenvalues with multiplicities of a finite-order matrix; multiplicity of
/// mu is recovered as (1/n) sum_j mu^{-j} Tr(M^j), an exact DFT over <M>.
std::map<RootOfUnity, i64> eigen_multiset(const CycMatrix& m, i64 cap = 1 << 20);

/// Sparse multivariate polynomial: exponent vector -> coefficient.
class MultiPoly {
 public:
  using Exp = std::vector<int>;
  explicit MultiPoly(i64 nvars = 0) : nvars_(nvars) {}
  static MultiPoly constant(i64 nvars, const Cyclotomic& c);
  static MultiPoly variable(i64 i, i64 nvars);
  static MultiPoly monomial(Exp e, const Cyclotomic& c);

  i64 nvars() const { return nvars_; }
  const std::map<Exp, Cyclotomic>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  i64 total_degree() const;  // -1 for zero
  bool is_homogeneous(i64 deg) const;

  void add_term(const Exp& e, const Cyclotomic& c);

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly& operator+=(const MultiPoly& b);
  MultiPoly scaled(const Cyclotomic& c) const;
  MultiPoly operator-() const;
  MultiPoly pow(i64 k) const;

  /// Substitution X_i -> sum_j B(i, j) X_j.
  MultiPoly subst_linear(const CycMatrix& b) const;
  Cyclotomic eval(const CycVector& point) const;
  MultiPoly partial(i64 i) const;

  /// f / g when g divides f exactly; nullopt otherwise.
  std::optional<MultiPoly> divide_exact(const MultiPoly& g) const;

  bool operator==(const MultiPoly& o) const;
  std::string str() const;

 private:
  i64 nvars_;
  std::map<Exp, Cyclotomic> t_;
};

/// Action of g on polynomial functions: (g.f)(v) = f(g^{-1} v), so this is
/// subst_linear with the inverse matrix.
MultiPoly poly_act(const CycMatrix& g_inverse, const MultiPoly& f);

}  // namespace refl
