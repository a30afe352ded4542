#include "refl/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace refl {

// ---------------------------------------------------------------------------
// CycMatrix

CycMatrix::CycMatrix(i64 rows, i64 cols, i64 conductor)
    : rows_(rows), cols_(cols), n_(conductor), a_(rows * cols, Cyclotomic::zero(conductor)) {}

CycMatrix CycMatrix::identity(i64 n, i64 conductor) {
  CycMatrix m(n, n, conductor);
  for (i64 i = 0; i < n; ++i) m.set(i, i, Cyclotomic::one(conductor));
  return m;
}

CycMatrix CycMatrix::scalar(i64 n, const Cyclotomic& c) {
  CycMatrix m(n, n, c.conductor());
  for (i64 i = 0; i < n; ++i) m.set(i, i, c);
  return m;
}

CycMatrix CycMatrix::from_rows(const std::vector<CycVector>& rows) {
  if (rows.empty()) return CycMatrix();
  i64 n = 1;
  for (const auto& r : rows)
    for (const auto& x : r) n = lcm_i64(n, x.conductor());
  CycMatrix m(static_cast<i64>(rows.size()), static_cast<i64>(rows[0].size()), n);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw linalg_error("ragged rows");
    for (size_t j = 0; j < rows[i].size(); ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

void CycMatrix::set(i64 i, i64 j, const Cyclotomic& v) {
  a_[i * cols_ + j] = v.conductor() == n_ ? v : v.embedded(n_);
}

CycMatrix CycMatrix::embedded(i64 bigger) const {
  if (bigger == n_) return *this;
  CycMatrix m(rows_, cols_, bigger);
  for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k].embedded(bigger);
  return m;
}

std::pair<CycMatrix, CycMatrix> aligned(const CycMatrix& a, const CycMatrix& b) {
  if (a.conductor() == b.conductor()) return {a, b};
  i64 L = lcm_i64(a.conductor(), b.conductor());
  return {a.embedded(L), b.embedded(L)};
}

CycMatrix operator*(const CycMatrix& x, const CycMatrix& y) {
  auto [a, b] = aligned(x, y);
  if (a.cols_ != b.rows_) throw linalg_error("matrix size mismatch in product");
  CycMatrix m(a.rows_, b.cols_, a.n_);
  for (i64 i = 0; i < a.rows_; ++i)
    for (i64 k = 0; k < a.cols_; ++k) {
      const Cyclotomic& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (i64 j = 0; j < b.cols_; ++j) {
        if (b.at(k, j).is_zero()) continue;
        m.a_[i * m.cols_ + j] += aik * b.at(k, j);
      }
    }
  return m;
}

CycMatrix operator+(const CycMatrix& x, const CycMatrix& y) {
  auto [a, b] = aligned(x, y);
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw linalg_error("matrix size mismatch");
  CycMatrix m = a;
  for (size_t k = 0; k < m.a_.size(); ++k) m.a_[k] += b.a_[k];
  return m;
}

CycMatrix operator-(const CycMatrix& x, const CycMatrix& y) {
  auto [a, b] = aligned(x, y);
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw linalg_error("matrix size mismatch");
  CycMatrix m = a;
  for (size_t k = 0; k < m.a_.size(); ++k) m.a_[k] -= b.a_[k];
  return m;
}

CycMatrix CycMatrix::scaled(const Cyclotomic& c) const {
  i64 L = lcm_i64(n_, c.conductor());
  CycMatrix m = embedded(L);
  Cyclotomic ce = c.embedded(L);
  for (auto& x : m.a_) x *= ce;
  return m;
}

CycMatrix CycMatrix::transpose() const {
  CycMatrix m(cols_, rows_, n_);
  for (i64 i = 0; i < rows_; ++i)
    for (i64 j = 0; j < cols_; ++j) m.a_[j * rows_ + i] = at(i, j);
  return m;
}

Cyclotomic CycMatrix::trace() const {
  if (rows_ != cols_) throw linalg_error("trace of non-square matrix");
  Cyclotomic t = Cyclotomic::zero(n_);
  for (i64 i = 0; i < rows_; ++i) t += at(i, i);
  return t;
}

bool CycMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (i64 i = 0; i < rows_; ++i)
    for (i64 j = 0; j < cols_; ++j) {
      if (i == j ? !(at(i, j) == Cyclotomic::one(n_)) : !at(i, j).is_zero()) return false;
    }
  return true;
}

bool CycMatrix::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

std::optional<Cyclotomic> CycMatrix::as_scalar() const {
  if (rows_ != cols_ || rows_ == 0) return std::nullopt;
  const Cyclotomic& c = at(0, 0);
  for (i64 i = 0; i < rows_; ++i)
    for (i64 j = 0; j < cols_; ++j) {
      if (i == j ? !(at(i, j) == c) : !at(i, j).is_zero()) return std::nullopt;
    }
  return c;
}

bool CycMatrix::operator==(const CycMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  if (n_ == o.n_) {
    for (size_t k = 0; k < a_.size(); ++k)
      if (!(a_[k].coeffs() == o.a_[k].coeffs())) return false;
    return true;
  }
  auto [a, b] = aligned(*this, o);
  return a == b;
}

std::string CycMatrix::key() const {
  std::ostringstream os;
  os << n_ << '#';
  for (const auto& x : a_) {
    for (const auto& c : x.coeffs()) os << c.get_str() << ',';
    os << ';';
  }
  return os.str();
}

std::string CycMatrix::str() const {
  std::ostringstream os;
  for (i64 i = 0; i < rows_; ++i) {
    os << "[";
    for (i64 j = 0; j < cols_; ++j) os << (j ? ", " : "") << at(i, j).str();
    os << "]\n";
  }
  return os.str();
}

CycVector mat_vec(const CycMatrix& m, const CycVector& v) {
  if (static_cast<i64>(v.size()) != m.cols()) throw linalg_error("mat_vec size mismatch");
  i64 L = m.conductor();
  for (const auto& x : v) L = lcm_i64(L, x.conductor());
  CycVector out(m.rows(), Cyclotomic::zero(L));
  for (i64 i = 0; i < m.rows(); ++i)
    for (i64 j = 0; j < m.cols(); ++j) {
      if (m.at(i, j).is_zero() || v[j].is_zero()) continue;
      out[i] += m.at(i, j).embedded(L) * v[j].embedded(L);
    }
  return out;
}

Cyclotomic det(const CycMatrix& m) {
  if (m.rows() != m.cols()) throw linalg_error("determinant of non-square matrix");
  i64 n = m.rows();
  if (n == 0) return Cyclotomic::one();
  // Bareiss fraction-free elimination; divisions are exact.
  std::vector<std::vector<Cyclotomic>> a(n, std::vector<Cyclotomic>(n, Cyclotomic::zero(m.conductor())));
  for (i64 i = 0; i < n; ++i)
    for (i64 j = 0; j < n; ++j) a[i][j] = m.at(i, j);
  Cyclotomic prev = Cyclotomic::one(m.conductor());
  i64 sign = 1;
  for (i64 k = 0; k < n - 1; ++k) {
    if (a[k][k].is_zero()) {
      i64 p = -1;
      for (i64 i = k + 1; i < n; ++i)
        if (!a[i][k].is_zero()) {
          p = i;
          break;
        }
      if (p < 0) return Cyclotomic::zero(m.conductor());
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (i64 i = k + 1; i < n; ++i)
      for (i64 j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  Cyclotomic d = a[n - 1][n - 1];
  return sign < 0 ? -d : d;
}

namespace {

// Row echelon reduction; returns pivot columns. Mutates rows in place.
std::vector<i64> rref(std::vector<CycVector>& rows, i64 ncols) {
  std::vector<i64> pivots;
  i64 r = 0;
  for (i64 c = 0; c < ncols && r < static_cast<i64>(rows.size()); ++c) {
    i64 p = -1;
    for (i64 i = r; i < static_cast<i64>(rows.size()); ++i)
      if (!rows[i][c].is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(rows[r], rows[p]);
    Cyclotomic inv = rows[r][c].inverse();
    for (i64 j = c; j < ncols; ++j) rows[r][j] = rows[r][j] * inv;
    for (i64 i = 0; i < static_cast<i64>(rows.size()); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      Cyclotomic f = rows[i][c];
      for (i64 j = c; j < ncols; ++j) rows[i][j] = rows[i][j] - f * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::vector<CycVector> matrix_rows(const CycMatrix& m) {
  std::vector<CycVector> rows(m.rows());
  for (i64 i = 0; i < m.rows(); ++i) {
    rows[i].reserve(m.cols());
    for (i64 j = 0; j < m.cols(); ++j) rows[i].push_back(m.at(i, j));
  }
  return rows;
}

}  // namespace

i64 rank(const CycMatrix& m) {
  auto rows = matrix_rows(m);
  return static_cast<i64>(rref(rows, m.cols()).size());
}

std::vector<CycVector> kernel(const CycMatrix& m) {
  auto rows = matrix_rows(m);
  auto pivots = rref(rows, m.cols());
  std::vector<bool> is_pivot(m.cols(), false);
  for (i64 p : pivots) is_pivot[p] = true;
  std::vector<CycVector> basis;
  for (i64 f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    CycVector v(m.cols(), Cyclotomic::zero(m.conductor()));
    v[f] = Cyclotomic::one(m.conductor());
    for (size_t r = 0; r < pivots.size(); ++r) {
      if (!rows[r][f].is_zero()) v[pivots[r]] = -rows[r][f];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

CycMatrix CycMatrix::inverse() const {
  if (rows_ != cols_) throw linalg_error("inverse of non-square matrix");
  std::vector<CycVector> rows(rows_);
  for (i64 i = 0; i < rows_; ++i) {
    rows[i].assign(2 * cols_, Cyclotomic::zero(n_));
    for (i64 j = 0; j < cols_; ++j) rows[i][j] = at(i, j);
    rows[i][cols_ + i] = Cyclotomic::one(n_);
  }
  auto pivots = rref(rows, 2 * cols_);
  if (static_cast<i64>(pivots.size()) != cols_ || pivots.back() != cols_ - 1)
    throw linalg_error("matrix not invertible");
  CycMatrix m(rows_, cols_, n_);
  for (i64 i = 0; i < rows_; ++i)
    for (i64 j = 0; j < cols_; ++j) m.set(i, j, rows[i][cols_ + j]);
  return m;
}

CycMatrix CycMatrix::pow(i64 k) const {
  if (rows_ != cols_) throw linalg_error("power of non-square matrix");
  if (k < 0) return inverse().pow(-k);
  CycMatrix result = identity(rows_, n_);
  CycMatrix base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

// ---------------------------------------------------------------------------
// UniPoly

void UniPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

UniPoly UniPoly::constant(const Cyclotomic& c) { return UniPoly(std::vector<Cyclotomic>{c}); }

UniPoly UniPoly::monomial(const Cyclotomic& c, i64 deg) {
  std::vector<Cyclotomic> v(deg + 1, Cyclotomic(0));
  v[deg] = c;
  return UniPoly(std::move(v));
}

Cyclotomic UniPoly::coeff(i64 i) const {
  if (i < 0 || i >= static_cast<i64>(c_.size())) return Cyclotomic(0);
  return c_[i];
}

namespace {
Cyclotomic add_mixed(const Cyclotomic& a, const Cyclotomic& b) {
  auto [x, y] = aligned(a, b);
  return x + y;
}
Cyclotomic mul_mixed(const Cyclotomic& a, const Cyclotomic& b) {
  auto [x, y] = aligned(a, b);
  return x * y;
}
}  // namespace

UniPoly operator+(const UniPoly& a, const UniPoly& b) {
  std::vector<Cyclotomic> c(std::max(a.c_.size(), b.c_.size()), Cyclotomic(0));
  for (size_t i = 0; i < c.size(); ++i) c[i] = add_mixed(a.coeff(i), b.coeff(i));
  return UniPoly(std::move(c));
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) {
  std::vector<Cyclotomic> c(std::max(a.c_.size(), b.c_.size()), Cyclotomic(0));
  for (size_t i = 0; i < c.size(); ++i) c[i] = add_mixed(a.coeff(i), -b.coeff(i));
  return UniPoly(std::move(c));
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return UniPoly();
  std::vector<Cyclotomic> c(a.c_.size() + b.c_.size() - 1, Cyclotomic(0));
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) {
      if (b.c_[j].is_zero()) continue;
      c[i + j] = add_mixed(c[i + j], mul_mixed(a.c_[i], b.c_[j]));
    }
  }
  return UniPoly(std::move(c));
}

UniPoly UniPoly::scaled(const Cyclotomic& c) const {
  std::vector<Cyclotomic> v = c_;
  for (auto& x : v) x = mul_mixed(x, c);
  return UniPoly(std::move(v));
}

Cyclotomic UniPoly::eval(const Cyclotomic& x) const {
  Cyclotomic acc(0);
  for (size_t i = c_.size(); i-- > 0;) acc = add_mixed(mul_mixed(acc, x), c_[i]);
  return acc;
}

bool UniPoly::operator==(const UniPoly& o) const {
  if (c_.size() != o.c_.size()) return false;
  for (size_t i = 0; i < c_.size(); ++i)
    if (!(c_[i] == o.c_[i])) return false;
  return true;
}

std::string UniPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    os << "(" << c_[i].str() << ")";
    if (i == 1) os << "*" << var;
    if (i > 1) os << "*" << var << "^" << i;
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// TruncSeries

TruncSeries::TruncSeries(i64 bound, Cyclotomic c0) : c_(bound + 1, Cyclotomic(0)) {
  if (bound < 0) throw linalg_error("series bound must be nonnegative");
  c_[0] = std::move(c0);
}

TruncSeries TruncSeries::from_poly(const UniPoly& p, i64 bound) {
  TruncSeries s(bound);
  for (i64 i = 0; i <= bound; ++i) s.c_[i] = p.coeff(i);
  return s;
}

namespace {
void require_same_bound(const TruncSeries& a, const TruncSeries& b) {
  if (a.bound() != b.bound()) throw linalg_error("series truncation bound mismatch");
}
}  // namespace

TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
  require_same_bound(a, b);
  TruncSeries r = a;
  for (i64 i = 0; i <= r.bound(); ++i) r.c_[i] = add_mixed(r.c_[i], b.c_[i]);
  return r;
}

TruncSeries& TruncSeries::operator+=(const TruncSeries& b) { return *this = *this + b; }

TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
  require_same_bound(a, b);
  TruncSeries r = a;
  for (i64 i = 0; i <= r.bound(); ++i) r.c_[i] = add_mixed(r.c_[i], -b.c_[i]);
  return r;
}

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
  require_same_bound(a, b);
  TruncSeries r(a.bound());
  for (i64 i = 0; i <= a.bound(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (i64 j = 0; i + j <= a.bound(); ++j) {
      if (b.c_[j].is_zero()) continue;
      r.c_[i + j] = add_mixed(r.c_[i + j], mul_mixed(a.c_[i], b.c_[j]));
    }
  }
  return r;
}

TruncSeries TruncSeries::scaled(const Cyclotomic& c) const {
  TruncSeries r = *this;
  for (auto& x : r.c_) x = mul_mixed(x, c);
  return r;
}

TruncSeries TruncSeries::invert() const {
  if (c_[0].is_zero()) throw linalg_error("series constant term not invertible");
  TruncSeries r(bound());
  Cyclotomic inv0 = c_[0].inverse();
  r.c_[0] = inv0;
  for (i64 k = 1; k <= bound(); ++k) {
    Cyclotomic s(0);
    for (i64 i = 1; i <= k; ++i) {
      if (c_[i].is_zero() || r.c_[k - i].is_zero()) continue;
      s = add_mixed(s, mul_mixed(c_[i], r.c_[k - i]));
    }
    r.c_[k] = mul_mixed(-s, inv0);
  }
  return r;
}

TruncSeries TruncSeries::mul_poly(const UniPoly& p) const {
  TruncSeries r(bound());
  for (i64 i = 0; i <= std::min<i64>(p.degree(), bound()); ++i) {
    Cyclotomic pi = p.coeff(i);
    if (pi.is_zero()) continue;
    for (i64 j = 0; i + j <= bound(); ++j) {
      if (c_[j].is_zero()) continue;
      r.c_[i + j] = add_mixed(r.c_[i + j], mul_mixed(pi, c_[j]));
    }
  }
  return r;
}

std::optional<UniPoly> TruncSeries::as_polynomial(i64 deg) const {
  for (i64 i = deg + 1; i <= bound(); ++i)
    if (!c_[i].is_zero()) return std::nullopt;
  std::vector<Cyclotomic> v(c_.begin(), c_.begin() + std::min<i64>(deg, bound()) + 1);
  return UniPoly(std::move(v));
}

bool TruncSeries::operator==(const TruncSeries& o) const {
  if (bound() != o.bound()) return false;
  for (i64 i = 0; i <= bound(); ++i)
    if (!(c_[i] == o.c_[i])) return false;
  return true;
}

std::string TruncSeries::str() const {
  std::ostringstream os;
  os << "[";
  for (i64 i = 0; i <= bound(); ++i) os << (i ? ", " : "") << c_[i].str();
  os << "] + O(x^" << bound() + 1 << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// Spectral helpers

UniPoly char_series(const CycMatrix& m) {
  if (m.rows() != m.cols()) throw linalg_error("char_series of non-square matrix");
  i64 r = m.rows();
  std::vector<Cyclotomic> p(r + 1, Cyclotomic::zero(m.conductor()));  // power traces
  CycMatrix mk = m;
  for (i64 k = 1; k <= r; ++k) {
    p[k] = mk.trace();
    if (k < r) mk = mk * m;
  }
  // Newton's identities: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i
  std::vector<Cyclotomic> e(r + 1, Cyclotomic::zero(m.conductor()));
  e[0] = Cyclotomic::one(m.conductor());
  for (i64 k = 1; k <= r; ++k) {
    Cyclotomic s = Cyclotomic::zero(m.conductor());
    for (i64 i = 1; i <= k; ++i) {
      Cyclotomic t = add_mixed(Cyclotomic(0), mul_mixed(e[k - i], p[i]));
      s = add_mixed(s, (i % 2 == 1) ? t : -t);
    }
    e[k] = s.scaled(Rational(1, static_cast<unsigned long>(k)));
  }
  // det(1 - T M) = sum (-1)^k e_k T^k
  std::vector<Cyclotomic> coeffs(r + 1, Cyclotomic(0));
  for (i64 k = 0; k <= r; ++k) coeffs[k] = (k % 2 == 0) ? e[k] : -e[k];
  return UniPoly(std::move(coeffs));
}

i64 element_order(const CycMatrix& m, i64 cap) {
  if (m.rows() != m.cols()) throw linalg_error("order of non-square matrix");
  CycMatrix p = m;
  for (i64 k = 1; k <= cap; ++k) {
    if (p.is_identity()) return k;
    p = p * m;
  }
  throw linalg_error("not finite order within cap");
}

std::map<RootOfUnity, i64> eigen_multiset(const CycMatrix& m, i64 cap) {
  i64 n = element_order(m, cap);
  i64 r = m.rows();
  i64 L = lcm_i64(m.conductor(), n);
  std::vector<Cyclotomic> traces(n, Cyclotomic::zero(L));
  CycMatrix p = CycMatrix::identity(r, m.conductor());
  for (i64 j = 0; j < n; ++j) {
    traces[j] = p.trace().embedded(L);
    if (j + 1 < n) p = p * m;
  }
  std::vector<Cyclotomic> zpow(n, Cyclotomic::one(L));  // zeta_n^j at conductor L
  Cyclotomic z = Cyclotomic::root(L, L / n);
  for (i64 j = 1; j < n; ++j) zpow[j] = zpow[j - 1] * z;
  std::map<RootOfUnity, i64> out;
  i64 total = 0;
  for (i64 s = 0; s < n; ++s) {
    Cyclotomic acc = Cyclotomic::zero(L);
    for (i64 j = 0; j < n; ++j)
      acc += zpow[mod_pos(-static_cast<i64>(j) * s, n)] * traces[j];
    acc = acc.scaled(Rational(1, static_cast<unsigned long>(n)));
    if (acc.is_zero()) continue;
    if (!acc.is_integer()) throw linalg_error("eigen multiplicity not integral");
    i64 mult = static_cast<i64>(acc.rational_part().get_num().get_si());
    if (mult < 0) throw linalg_error("negative eigen multiplicity");
    if (mult > 0) {
      out[RootOfUnity(n, s)] = mult;
      total += mult;
    }
  }
  if (total != r) throw linalg_error("eigen multiplicities do not sum to dimension");
  return out;
}

// ---------------------------------------------------------------------------
// MultiPoly

MultiPoly MultiPoly::constant(i64 nvars, const Cyclotomic& c) {
  MultiPoly p(nvars);
  if (!c.is_zero()) p.t_[Exp(nvars, 0)] = c;
  return p;
}

MultiPoly MultiPoly::variable(i64 i, i64 nvars) {
  MultiPoly p(nvars);
  Exp e(nvars, 0);
  e[i] = 1;
  p.t_[e] = Cyclotomic(1);
  return p;
}

MultiPoly MultiPoly::monomial(Exp e, const Cyclotomic& c) {
  MultiPoly p(static_cast<i64>(e.size()));
  if (!c.is_zero()) p.t_[std::move(e)] = c;
  return p;
}

i64 MultiPoly::total_degree() const {
  i64 d = -1;
  for (const auto& [e, c] : t_) {
    i64 s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

bool MultiPoly::is_homogeneous(i64 deg) const {
  for (const auto& [e, c] : t_) {
    i64 s = 0;
    for (int x : e) s += x;
    if (s != deg) return false;
  }
  return true;
}

void MultiPoly::add_term(const Exp& e, const Cyclotomic& c) {
  if (c.is_zero()) return;
  auto it = t_.find(e);
  if (it == t_.end()) {
    t_.emplace(e, c);
  } else {
    it->second = add_mixed(it->second, c);
    if (it->second.is_zero()) t_.erase(it);
  }
}

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars_ != b.nvars_) throw linalg_error("nvars mismatch");
  MultiPoly r = a;
  for (const auto& [e, c] : b.t_) r.add_term(e, c);
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& b) {
  if (nvars_ != b.nvars_) throw linalg_error("nvars mismatch");
  for (const auto& [e, c] : b.t_) add_term(e, c);
  return *this;
}

MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars_ != b.nvars_) throw linalg_error("nvars mismatch");
  MultiPoly r = a;
  for (const auto& [e, c] : b.t_) r.add_term(e, -c);
  return r;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(nvars_);
  for (const auto& [e, c] : t_) r.t_[e] = -c;
  return r;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars_ != b.nvars_) throw linalg_error("nvars mismatch");
  MultiPoly r(a.nvars_);
  MultiPoly::Exp e(a.nvars_);
  for (const auto& [ea, ca] : a.t_) {
    for (const auto& [eb, cb] : b.t_) {
      for (i64 i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, mul_mixed(ca, cb));
    }
  }
  return r;
}

MultiPoly MultiPoly::scaled(const Cyclotomic& c) const {
  MultiPoly r(nvars_);
  if (c.is_zero()) return r;
  for (const auto& [e, x] : t_) r.t_[e] = mul_mixed(x, c);
  return r;
}

MultiPoly MultiPoly::pow(i64 k) const {
  MultiPoly result = constant(nvars_, Cyclotomic(1));
  MultiPoly base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

MultiPoly MultiPoly::subst_linear(const CycMatrix& b) const {
  if (b.rows() != nvars_ || b.cols() != nvars_) throw linalg_error("substitution matrix size");
  // linear forms replacing each variable
  std::vector<MultiPoly> forms(nvars_, MultiPoly(nvars_));
  for (i64 i = 0; i < nvars_; ++i) {
    for (i64 j = 0; j < nvars_; ++j) {
      if (b.at(i, j).is_zero()) continue;
      Exp e(nvars_, 0);
      e[j] = 1;
      forms[i].add_term(e, b.at(i, j));
    }
  }
  // memoized powers of each form
  std::vector<std::vector<MultiPoly>> powers(nvars_);
  for (i64 i = 0; i < nvars_; ++i) powers[i].push_back(constant(nvars_, Cyclotomic(1)));
  auto form_pow = [&](i64 i, int k) -> const MultiPoly& {
    while (static_cast<int>(powers[i].size()) <= k)
      powers[i].push_back(powers[i].back() * forms[i]);
    return powers[i][k];
  };
  MultiPoly r(nvars_);
  for (const auto& [e, c] : t_) {
    MultiPoly term = constant(nvars_, c);
    for (i64 i = 0; i < nvars_; ++i)
      if (e[i] > 0) term = term * form_pow(i, e[i]);
    r += term;
  }
  return r;
}

Cyclotomic MultiPoly::eval(const CycVector& point) const {
  if (static_cast<i64>(point.size()) != nvars_) throw linalg_error("eval point size");
  Cyclotomic acc(0);
  for (const auto& [e, c] : t_) {
    Cyclotomic term = c;
    for (i64 i = 0; i < nvars_; ++i)
      if (e[i] > 0) term = mul_mixed(term, point[i].pow(e[i]));
    acc = add_mixed(acc, term);
  }
  return acc;
}

MultiPoly MultiPoly::partial(i64 i) const {
  MultiPoly r(nvars_);
  for (const auto& [e, c] : t_) {
    if (e[i] == 0) continue;
    Exp d = e;
    d[i] -= 1;
    r.add_term(d, c.scaled(Rational(e[i])));
  }
  return r;
}

std::optional<MultiPoly> MultiPoly::divide_exact(const MultiPoly& g) const {
  if (g.is_zero()) return std::nullopt;
  MultiPoly rem = *this;
  MultiPoly q(nvars_);
  const auto& [lg, cg] = *g.t_.rbegin();
  while (!rem.is_zero()) {
    const auto& [lr, cr] = *rem.t_.rbegin();
    Exp e(nvars_);
    for (i64 i = 0; i < nvars_; ++i) {
      e[i] = lr[i] - lg[i];
      if (e[i] < 0) return std::nullopt;
    }
    MultiPoly t = monomial(e, mul_mixed(cr, cg.inverse()));
    q += t;
    rem = rem - t * g;
  }
  return q;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
  if (nvars_ != o.nvars_) return false;
  return (*this - o).is_zero();
}

std::string MultiPoly::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : t_) {
    if (!first) os << " + ";
    os << "(" << c.str() << ")";
    for (i64 i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      os << "*X" << i + 1;
      if (e[i] > 1) os << "^" << e[i];
    }
    first = false;
  }
  return os.str();
}

MultiPoly poly_act(const CycMatrix& g_inverse, const MultiPoly& f) {
  return f.subst_linear(g_inverse);
}

}  // namespace refl
