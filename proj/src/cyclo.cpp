#include "refl/cyclo.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace refl {

namespace {

// Integer polynomial division f / g with g monic, exact; coeffs by ascending degree.
std::vector<mpz_class> exact_div_monic(const std::vector<mpz_class>& f,
                                       const std::vector<mpz_class>& g) {
  std::vector<mpz_class> r = f;
  const size_t dg = g.size() - 1;
  std::vector<mpz_class> q(r.size() - dg, 0);
  for (size_t i = r.size(); i-- > dg;) {
    mpz_class c = r[i];
    if (c == 0) continue;
    q[i - dg] = c;
    for (size_t j = 0; j <= dg; ++j) r[i - dg + j] -= c * g[j];
  }
  for (const auto& c : r)
    if (c != 0) throw cyclo_error("cyclotomic polynomial division not exact");
  return q;
}

std::map<i64, std::vector<mpz_class>> phi_cache;
std::mutex phi_mutex;

// Caller holds phi_mutex; recursion stays under the single lock.
const std::vector<mpz_class>& phi_locked(i64 n) {
  auto it = phi_cache.find(n);
  if (it != phi_cache.end()) return it->second;
  std::vector<mpz_class> f;
  if (n == 1) {
    f = {-1, 1};  // x - 1
  } else {
    f.assign(n + 1, 0);
    f[0] = -1;
    f[n] = 1;  // x^n - 1
    for (i64 d : divisors(n)) {
      if (d == n) continue;
      f = exact_div_monic(f, phi_locked(d));
    }
  }
  return phi_cache.emplace(n, std::move(f)).first->second;
}

}  // namespace

const std::vector<mpz_class>& cyclotomic_polynomial(i64 n) {
  std::lock_guard<std::mutex> lock(phi_mutex);
  return phi_locked(n);
}

// ---------------------------------------------------------------------------
// RootOfUnity

RootOfUnity::RootOfUnity(i64 n, i64 k) {
  if (n <= 0) throw cyclo_error("root of unity needs positive order");
  k = mod_pos(k, n);
  i64 g = std::gcd(k, n);
  order_ = n / g;
  exp_ = (k / g) % order_;
}

RootOfUnity RootOfUnity::pow(i64 k) const { return RootOfUnity(order_, exp_ * mod_pos(k, order_)); }

RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b) {
  i64 L = lcm_i64(a.order_, b.order_);
  return RootOfUnity(L, a.exp_ * (L / a.order_) + b.exp_ * (L / b.order_));
}

std::string RootOfUnity::str() const {
  if (order_ == 1) return "1";
  if (order_ == 2) return "-1";
  std::ostringstream os;
  os << "z" << order_;
  if (exp_ != 1) os << "^" << exp_;
  return os.str();
}

// ---------------------------------------------------------------------------
// Cyclotomic

Cyclotomic::Cyclotomic(i64 conductor, std::vector<Rational> coeffs) : n_(conductor), c_(std::move(coeffs)) {
  size_t phi = static_cast<size_t>(euler_phi(n_));
  if (c_.size() != phi) throw cyclo_error("coefficient vector has wrong length");
  for (auto& x : c_) x.canonicalize();
}

Cyclotomic Cyclotomic::zero(i64 n) {
  return Cyclotomic(n, std::vector<Rational>(euler_phi(n), Rational(0)));
}

Cyclotomic Cyclotomic::one(i64 n) { return from_rational(Rational(1), n); }

Cyclotomic Cyclotomic::from_rational(const Rational& r, i64 n) {
  std::vector<Rational> c(euler_phi(n), Rational(0));
  c[0] = r;
  c[0].canonicalize();
  return Cyclotomic(n, std::move(c));
}

Cyclotomic Cyclotomic::root(i64 n, i64 k) {
  Cyclotomic z = zero(n);
  std::vector<Rational> raw(n, Rational(0));
  raw[mod_pos(k, n)] = 1;
  z.reduce_raw(raw);
  z.c_.assign(raw.begin(), raw.begin() + euler_phi(n));
  return z;
}

Cyclotomic Cyclotomic::from_root(const RootOfUnity& z, i64 conductor) {
  i64 n = z.order();
  if (conductor % n == 0) return root(conductor, z.exp() * (conductor / n));
  // zeta_{2m} = -zeta_m^{(m+1)/2} for odd m, so order-2m roots live at
  // conductor m as well.
  if (n % 2 == 0 && (n / 2) % 2 == 1 && conductor % (n / 2) == 0) {
    i64 m = n / 2;
    i64 k = z.exp();
    Cyclotomic base = root(conductor, mod_pos(k * ((m + 1) / 2), m) * (conductor / m));
    return (k % 2 == 0) ? base : -base;
  }
  throw cyclo_error("conductor does not contain requested root of unity");
}

bool Cyclotomic::is_zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

bool Cyclotomic::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

Rational Cyclotomic::rational_part() const {
  if (!is_rational()) throw cyclo_error("value is not rational");
  return c_[0];
}

bool Cyclotomic::is_integer() const {
  return is_rational() && c_[0].get_den() == 1;
}

// Divide out Phi_n (monic): raw has size n_ (or more), indexed by power of zeta.
void Cyclotomic::reduce_raw(std::vector<Rational>& raw) const {
  const auto& phi = cyclotomic_polynomial(n_);
  const size_t d = phi.size() - 1;
  for (size_t i = raw.size(); i-- > d;) {
    if (raw[i] == 0) continue;
    Rational c = raw[i];
    raw[i] = 0;
    for (size_t j = 0; j < d; ++j) raw[i - d + j] -= c * Rational(phi[j]);
  }
}

Cyclotomic Cyclotomic::embedded(i64 bigger) const {
  if (bigger == n_) return *this;
  if (bigger % n_ != 0) throw cyclo_error("embedding target is not a multiple of conductor");
  i64 step = bigger / n_;
  Cyclotomic out = zero(bigger);
  std::vector<Rational> raw(bigger, Rational(0));
  for (size_t i = 0; i < c_.size(); ++i) raw[i * step] += c_[i];
  out.reduce_raw(raw);
  out.c_.assign(raw.begin(), raw.begin() + euler_phi(bigger));
  return out;
}

std::pair<Cyclotomic, Cyclotomic> aligned(const Cyclotomic& a, const Cyclotomic& b) {
  if (a.conductor() == b.conductor()) return {a, b};
  i64 L = lcm_i64(a.conductor(), b.conductor());
  return {a.embedded(L), b.embedded(L)};
}

namespace {
void require_same_conductor(const Cyclotomic& a, const Cyclotomic& b) {
  if (a.conductor() != b.conductor())
    throw cyclo_error("conductor mismatch: embed operands to a common conductor first");
}
}  // namespace

Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
  require_same_conductor(a, b);
  Cyclotomic r = a;
  for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
  return r;
}

Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) {
  require_same_conductor(a, b);
  Cyclotomic r = a;
  for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
  return r;
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& b) { return *this = *this + b; }
Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& b) { return *this = *this - b; }
Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& b) { return *this = *this * b; }

Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
  require_same_conductor(a, b);
  const size_t phi = a.c_.size();
  Cyclotomic r = Cyclotomic::zero(a.n_);
  std::vector<Rational> raw(std::max<size_t>(2 * phi - 1, static_cast<size_t>(a.n_)), Rational(0));
  for (size_t i = 0; i < phi; ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < phi; ++j) {
      if (b.c_[j] == 0) continue;
      raw[i + j] += a.c_[i] * b.c_[j];
    }
  }
  r.reduce_raw(raw);
  r.c_.assign(raw.begin(), raw.begin() + phi);
  return r;
}

namespace {

// Polynomials over Q, ascending coefficients, for the inverse computation.
using QP = std::vector<Rational>;

void qp_trim(QP& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

QP qp_sub_scaled(const QP& a, const QP& b, const Rational& c, size_t shift) {
  QP r = a;
  if (r.size() < b.size() + shift) r.resize(b.size() + shift, Rational(0));
  for (size_t i = 0; i < b.size(); ++i) r[i + shift] -= c * b[i];
  qp_trim(r);
  return r;
}

// Extended gcd: returns (g, u) with u*a = g mod m, g constant when gcd(a,m)=1.
std::pair<QP, QP> qp_half_ext_gcd(QP a, QP m) {
  QP r0 = std::move(m), r1 = std::move(a);
  QP u0 = {}, u1 = {Rational(1)};
  qp_trim(r0);
  qp_trim(r1);
  while (!r1.empty()) {
    // divide r0 by r1
    QP q(r0.size() > r1.size() - 1 ? r0.size() - r1.size() + 1 : 1, Rational(0));
    QP rem = r0;
    while (rem.size() >= r1.size() && !rem.empty()) {
      Rational c = rem.back() / r1.back();
      size_t shift = rem.size() - r1.size();
      q[shift] = c;
      rem = qp_sub_scaled(rem, r1, c, shift);
      if (!rem.empty() && rem.size() >= r1.size() && rem.back() == 0) qp_trim(rem);
    }
    qp_trim(q);
    // u2 = u0 - q*u1
    QP qu1(q.size() + u1.size(), Rational(0));
    for (size_t i = 0; i < q.size(); ++i)
      for (size_t j = 0; j < u1.size(); ++j) qu1[i + j] += q[i] * u1[j];
    qp_trim(qu1);
    QP u2 = u0;
    if (u2.size() < qu1.size()) u2.resize(qu1.size(), Rational(0));
    for (size_t i = 0; i < qu1.size(); ++i) u2[i] -= qu1[i];
    qp_trim(u2);
    r0 = std::move(r1);
    r1 = std::move(rem);
    u0 = std::move(u1);
    u1 = std::move(u2);
  }
  return {r0, u0};
}

}  // namespace

Cyclotomic Cyclotomic::inverse() const {
  if (is_zero()) throw cyclo_error("division by zero");
  if (is_rational()) return from_rational(Rational(1) / c_[0], n_);
  const auto& phiz = cyclotomic_polynomial(n_);
  QP m(phiz.size());
  for (size_t i = 0; i < phiz.size(); ++i) m[i] = Rational(phiz[i]);
  QP a(c_.begin(), c_.end());
  qp_trim(a);
  auto [g, u] = qp_half_ext_gcd(a, m);
  if (g.size() != 1) throw cyclo_error("inverse failed: gcd not constant");
  Rational scale = Rational(1) / g[0];
  std::vector<Rational> coeffs(c_.size(), Rational(0));
  // u may have degree >= phi(n): reduce
  std::vector<Rational> raw(std::max<size_t>(u.size(), static_cast<size_t>(n_)), Rational(0));
  for (size_t i = 0; i < u.size(); ++i) raw[i] = u[i] * scale;
  reduce_raw(raw);
  for (size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = raw[i];
  return Cyclotomic(n_, std::move(coeffs));
}

Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b) { return a * b.inverse(); }

Cyclotomic Cyclotomic::pow(i64 k) const {
  if (k < 0) return inverse().pow(-k);
  Cyclotomic result = one(n_);
  Cyclotomic base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

Cyclotomic Cyclotomic::scaled(const Rational& r) const {
  Rational rc = r;
  rc.canonicalize();
  Cyclotomic out = *this;
  for (auto& x : out.c_) x *= rc;
  return out;
}

bool Cyclotomic::operator==(const Cyclotomic& o) const {
  if (n_ == o.n_) return c_ == o.c_;
  auto [a, b] = aligned(*this, o);
  return a.c_ == b.c_;
}

std::string Cyclotomic::str() const {
  if (is_rational()) return c_[0].get_str();
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    os << c_[i].get_str();
    if (i >= 1) os << "*z" << n_ << (i > 1 ? "^" + std::to_string(i) : "");
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

Cyclotomic galois_apply(i64 k, const Cyclotomic& a) {
  i64 n = a.conductor();
  k = mod_pos(k, n);
  if (std::gcd(k, n) != 1) throw cyclo_error("galois exponent not coprime to conductor");
  std::vector<Rational> raw(n, Rational(0));
  const auto& c = a.coeffs();
  for (size_t i = 0; i < c.size(); ++i) raw[(i * k) % n] += c[i];
  const auto& phi = cyclotomic_polynomial(n);
  const size_t d = phi.size() - 1;
  for (size_t i = raw.size(); i-- > d;) {
    if (raw[i] == 0) continue;
    Rational cc = raw[i];
    raw[i] = 0;
    for (size_t j = 0; j < d; ++j) raw[i - d + j] -= cc * Rational(phi[j]);
  }
  std::vector<Rational> coeffs(raw.begin(), raw.begin() + d);
  return Cyclotomic(n, std::move(coeffs));
}

Cyclotomic conj(const Cyclotomic& a) {
  return galois_apply(a.conductor() - 1, a);
}

std::optional<RootOfUnity> as_root_of_unity(const Cyclotomic& a) {
  if (a.is_zero()) return std::nullopt;
  i64 n = a.conductor();
  i64 M = lcm_i64(2, n);  // the roots of unity in Q(zeta_n) form mu_M
  i64 order = 0;
  for (i64 d : divisors(M)) {
    if (a.pow(d) == Cyclotomic::one(n)) {
      order = d;
      break;
    }
  }
  if (order == 0) return std::nullopt;
  i64 L = lcm_i64(n, order);
  Cyclotomic ae = a.embedded(L);
  Cyclotomic z = Cyclotomic::root(L, L / order);  // zeta_order at conductor L
  Cyclotomic p = Cyclotomic::one(L);
  for (i64 k = 0; k < order; ++k) {
    if (p == ae) return RootOfUnity(order, k);
    p *= z;
  }
  return std::nullopt;  // not reachable for true roots of unity
}

}  // namespace refl
