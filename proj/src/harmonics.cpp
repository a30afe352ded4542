#include "refl/harmonics.hpp"

#include <algorithm>
#include <mutex>
#include <random>
#include <sstream>

namespace refl {

namespace {

Cyclotomic add_any(const Cyclotomic& x, const Cyclotomic& y) {
  auto [a, b] = aligned(x, y);
  return a + b;
}
Cyclotomic mul_any(const Cyclotomic& x, const Cyclotomic& y) {
  auto [a, b] = aligned(x, y);
  return a * b;
}

// ---------------------------------------------------------------------------
// sparse vectors over (monomial, component) keys

using SKey = std::pair<std::vector<int>, i64>;
using SVec = std::map<SKey, Cyclotomic>;

SVec to_svec(const PolyVec& pv) {
  SVec v;
  for (i64 t = 0; t < static_cast<i64>(pv.size()); ++t)
    for (const auto& [e, c] : pv[t].terms()) v[{e, t}] = c;
  return v;
}

PolyVec from_svec(const SVec& v, i64 nvars, i64 ncomp) {
  PolyVec pv(ncomp, MultiPoly(nvars));
  for (const auto& [k, c] : v) pv[k.second].add_term(k.first, c);
  return pv;
}

void svec_axpy(SVec& v, const Cyclotomic& c, const SVec& row) {
  for (const auto& [k, x] : row) {
    auto it = v.find(k);
    Cyclotomic nv = it == v.end() ? mul_any(-c, x) : add_any(it->second, mul_any(-c, x));
    if (nv.is_zero()) {
      if (it != v.end()) v.erase(it);
    } else {
      v[k] = nv;
    }
  }
}

/// Forward-echelon store with optional coordinate tracking against the
/// inserted originals.
struct Echelon {
  std::vector<SVec> rows;       // unit leading coefficient
  std::vector<SKey> leads;
  std::vector<std::vector<Cyclotomic>> tf;  // row as combo of inserted origs
  i64 inserted = 0;

  // Reduces v in place; fills coefficients against each row when asked.
  void reduce(SVec& v, std::vector<Cyclotomic>* coefs) const {
    if (coefs) coefs->assign(rows.size(), Cyclotomic(0));
    for (size_t i = 0; i < rows.size(); ++i) {
      auto it = v.find(leads[i]);
      if (it == v.end()) continue;
      Cyclotomic c = it->second;
      if (coefs) (*coefs)[i] = c;
      svec_axpy(v, c, rows[i]);
    }
  }

  // Returns true when v extended the span.
  bool insert(SVec v) {
    std::vector<Cyclotomic> coefs;
    reduce(v, &coefs);
    i64 my_index = inserted++;
    if (v.empty()) return false;
    Cyclotomic lead = v.begin()->second;
    Cyclotomic inv = lead.inverse();
    SVec row;
    for (auto& [k, c] : v) row[k] = mul_any(c, inv);
    std::vector<Cyclotomic> t(my_index + 1, Cyclotomic(0));
    t[my_index] = inv;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (coefs[i].is_zero()) continue;
      for (size_t j = 0; j < tf[i].size(); ++j)
        t[j] = add_any(t[j], mul_any(mul_any(-coefs[i], inv), tf[i][j]));
    }
    rows.push_back(std::move(row));
    leads.push_back(rows.back().begin()->first);
    tf.push_back(std::move(t));
    return true;
  }

  // Expresses z in terms of the inserted originals; nullopt if z is outside.
  std::optional<std::vector<Cyclotomic>> express(SVec z) const {
    std::vector<Cyclotomic> coefs;
    reduce(z, &coefs);
    if (!z.empty()) return std::nullopt;
    std::vector<Cyclotomic> out(inserted, Cyclotomic(0));
    for (size_t i = 0; i < rows.size(); ++i) {
      if (coefs[i].is_zero()) continue;
      for (size_t j = 0; j < tf[i].size(); ++j)
        out[j] = add_any(out[j], mul_any(coefs[i], tf[i][j]));
    }
    return out;
  }

  i64 rank() const { return static_cast<i64>(rows.size()); }
};

// ---------------------------------------------------------------------------
// group action on S (x) M*

struct ActionTable {
  // per element: (inverse matrix on V, rho_{M*}(g) = rho_M(g^{-1})^T as raw)
  std::vector<CycMatrix> vinv;
  std::vector<CycMatrix> mdual;  // entry (s,t) = rho_M(g^{-1})_{t s}
};

ActionTable make_action_table(const ReflectionGroup& g, const ModuleRep& m,
                              const std::vector<i64>& elems) {
  ActionTable t;
  for (i64 x : elems) {
    CycMatrix gi = g.element(g.inverse_index(x));
    t.mdual.push_back(m.act(gi).transpose());
    t.vinv.push_back(std::move(gi));
  }
  return t;
}

PolyVec act_polyvec(const CycMatrix& vinv, const CycMatrix& mdual, const PolyVec& pv) {
  i64 md = static_cast<i64>(pv.size());
  i64 nvars = vinv.rows();
  PolyVec out(md, MultiPoly(nvars));
  for (i64 t = 0; t < md; ++t) {
    if (pv[t].is_zero()) continue;
    MultiPoly moved = pv[t].subst_linear(vinv);
    for (i64 s = 0; s < md; ++s) {
      const Cyclotomic& c = mdual.at(s, t);
      if (c.is_zero()) continue;
      out[s] += moved.scaled(c);
    }
  }
  return out;
}

void polyvec_add(PolyVec& a, const PolyVec& b, const Cyclotomic& scale) {
  for (size_t t = 0; t < a.size(); ++t) a[t] += b[t].scaled(scale);
}

bool polyvec_equal(const PolyVec& a, const PolyVec& b) {
  for (size_t t = 0; t < a.size(); ++t)
    if (!(a[t] == b[t])) return false;
  return true;
}

// cached split of a group into its monomial-matrix subgroup and a left
// transversal: Reynolds averaging runs the cheap monomial part first
struct MonomialSplit {
  std::vector<i64> subgroup;
  std::vector<i64> transversal;
};

std::map<const ReflectionGroup*, MonomialSplit> split_cache;
std::mutex split_mutex;

bool is_monomial_matrix(const CycMatrix& m) {
  for (i64 i = 0; i < m.rows(); ++i) {
    i64 nz = 0;
    for (i64 j = 0; j < m.cols(); ++j)
      if (!m.at(i, j).is_zero()) ++nz;
    if (nz != 1) return false;
  }
  return true;
}

const MonomialSplit& monomial_split(const ReflectionGroup& g) {
  std::lock_guard<std::mutex> lock(split_mutex);
  auto it = split_cache.find(&g);
  if (it != split_cache.end()) return it->second;
  MonomialSplit s;
  for (i64 x = 0; x < g.order(); ++x)
    if (is_monomial_matrix(g.element(x))) s.subgroup.push_back(x);
  std::vector<bool> covered(g.order(), false);
  for (i64 x = 0; x < g.order(); ++x) {
    if (covered[x]) continue;
    s.transversal.push_back(x);
    for (i64 h : s.subgroup) covered[g.product_index(x, h)] = true;
  }
  return split_cache.emplace(&g, std::move(s)).first->second;
}

// Reynolds operator on S (x) M* via the two-stage average.
struct ReynoldsOp {
  const ReflectionGroup* g;
  ActionTable sub, trans;
  i64 nsub, ntrans;

  ReynoldsOp(const ReflectionGroup& grp, const ModuleRep& m) : g(&grp) {
    const MonomialSplit& s = monomial_split(grp);
    sub = make_action_table(grp, m, s.subgroup);
    trans = make_action_table(grp, m, s.transversal);
    nsub = static_cast<i64>(s.subgroup.size());
    ntrans = static_cast<i64>(s.transversal.size());
  }

  PolyVec apply(const PolyVec& f) const {
    i64 md = static_cast<i64>(f.size());
    i64 nvars = g->dim();
    PolyVec stage(md, MultiPoly(nvars));
    for (i64 i = 0; i < nsub; ++i)
      polyvec_add(stage, act_polyvec(sub.vinv[i], sub.mdual[i], f), Cyclotomic(1));
    PolyVec out(md, MultiPoly(nvars));
    for (i64 i = 0; i < ntrans; ++i)
      polyvec_add(out, act_polyvec(trans.vinv[i], trans.mdual[i], stage), Cyclotomic(1));
    Cyclotomic inv(Rational(1, static_cast<unsigned long>(g->order())));
    for (auto& q : out) q = q.scaled(inv);
    return out;
  }
};

std::vector<std::vector<int>> monomials_of_degree(i64 nvars, i64 d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(nvars, 0);
  // lexicographic enumeration of compositions of d into nvars parts
  std::function<void(i64, i64)> rec = [&](i64 pos, i64 left) {
    if (pos == nvars - 1) {
      cur[pos] = static_cast<int>(left);
      out.push_back(cur);
      return;
    }
    for (i64 v = left; v >= 0; --v) {
      cur[pos] = static_cast<int>(v);
      rec(pos + 1, left - v);
    }
  };
  if (nvars == 0) return out;
  rec(0, d);
  return out;
}

}  // namespace

i64 invariant_dimension(const ReflectionGroup& g, const ModuleRep& m, i64 d) {
  // dedupe summands by (char poly, module trace)
  std::map<std::string, std::pair<i64, std::pair<UniPoly, Cyclotomic>>> buckets;
  for (i64 x = 0; x < g.order(); ++x) {
    const CycMatrix& gm = g.element(x);
    UniPoly cs = char_series(gm);
    Cyclotomic tr = m.act(gm).trace();
    std::ostringstream key;
    for (i64 i = 0; i <= cs.degree(); ++i) key << cs.coeff(i).conductor() << "|" << cs.coeff(i).str() << ";";
    key << "#" << tr.conductor() << "|" << tr.str();
    auto it = buckets.find(key.str());
    if (it == buckets.end())
      buckets.emplace(key.str(), std::make_pair(i64{1}, std::make_pair(std::move(cs), std::move(tr))));
    else
      it->second.first += 1;
  }
  Cyclotomic acc(0);
  for (const auto& [key, entry] : buckets) {
    const auto& [count, data] = entry;
    const auto& [cs, tr] = data;
    if (tr.is_zero()) continue;
    TruncSeries s = TruncSeries::from_poly(cs, d).invert();
    acc = add_any(acc, mul_any(s.coeff(d), tr.scaled(Rational(count))));
  }
  acc = acc.scaled(Rational(1, static_cast<unsigned long>(g.order())));
  if (!acc.is_integer()) throw harmonics_error("invariant dimension is not an integer");
  return static_cast<i64>(acc.rational_part().get_num().get_si());
}

std::vector<PolyVec> invariant_space(const ReflectionGroup& g, const ModuleRep& m, i64 d) {
  i64 target = invariant_dimension(g, m, d);
  std::vector<PolyVec> basis;
  if (target == 0) return basis;
  i64 md = m.dim(g.dim());
  i64 nvars = g.dim();
  ReynoldsOp rey(g, m);
  Echelon ech;
  auto try_seed = [&](PolyVec seed) {
    PolyVec avg = rey.apply(seed);
    bool zero = true;
    for (const auto& q : avg)
      if (!q.is_zero()) zero = false;
    if (zero) return false;
    if (!ech.insert(to_svec(avg))) return false;
    basis.push_back(std::move(avg));
    return true;
  };
  auto monos = monomials_of_degree(nvars, d);
  for (const auto& e : monos) {
    for (i64 t = 0; t < md && static_cast<i64>(basis.size()) < target; ++t) {
      PolyVec seed(md, MultiPoly(nvars));
      seed[t] = MultiPoly::monomial(e, Cyclotomic(1));
      try_seed(std::move(seed));
    }
    if (static_cast<i64>(basis.size()) >= target) break;
  }
  if (static_cast<i64>(basis.size())  < target)
    throw harmonics_error("Reynolds averaging exhausted the spanning set prematurely");
  return basis;
}

// ---------------------------------------------------------------------------
// basic invariants

namespace {

std::vector<i64> factor_degrees_sorted(const FactorSet& fs) {
  std::vector<i64> v;
  for (const auto& f : fs.items) v.push_back(f.d());
  std::sort(v.begin(), v.end());
  return v;
}

// memoized power products of the chosen basics
struct BasicProducts {
  const std::vector<BasicInvariant>* items;
  std::map<std::vector<int>, MultiPoly> cache;

  const MultiPoly& power_product(const std::vector<int>& alpha) {
    auto it = cache.find(alpha);
    if (it != cache.end()) return it->second;
    i64 nvars = (*items)[0].p.nvars();
    // find last positive exponent, recurse
    i64 last = -1;
    for (i64 i = 0; i < static_cast<i64>(alpha.size()); ++i)
      if (alpha[i] > 0) last = i;
    MultiPoly value(nvars);
    if (last < 0) {
      value = MultiPoly::constant(nvars, Cyclotomic(1));
    } else {
      std::vector<int> prev = alpha;
      prev[last] -= 1;
      value = power_product(prev) * (*items)[last].p;
    }
    return cache.emplace(alpha, std::move(value)).first->second;
  }

  // all exponent vectors with given weighted degree and minimum total size
  void enumerate(i64 weighted, i64 min_total, std::vector<std::vector<int>>& out) const {
    std::vector<int> cur(items->size(), 0);
    std::function<void(i64, i64, i64)> rec = [&](i64 pos, i64 left, i64 total) {
      if (pos == static_cast<i64>(items->size())) {
        if (left == 0 && total >= min_total) out.push_back(cur);
        return;
      }
      i64 dg = (*items)[pos].degree;
      for (i64 k = 0; k * dg <= left; ++k) {
        cur[pos] = static_cast<int>(k);
        rec(pos + 1, left - k * dg, total + k);
      }
      cur[pos] = 0;
    };
    rec(0, weighted, 0);
  }
};

struct HarmonicsCacheEntry {
  GroupPtr pin;  // keeps the group address from being recycled into a new key
  std::optional<BasicInvariants> basics;
  std::optional<MultiPoly> delta;
  std::optional<MultiPoly> delta_expr;  // delta in the basics
  std::map<std::string, HarmonicBasis> bases;
};

std::map<std::string, HarmonicsCacheEntry> harm_cache;
std::mutex harm_mutex;

std::string coset_key(const ReflectionCoset& c) {
  std::ostringstream os;
  os << static_cast<const void*>(&c.group()) << "/" << c.gamma().key();
  return os.str();
}

// gamma-eigen lift: v = (1/n) sum_j eps^{-j} gamma^j v0 satisfies
// gamma v = eps v and maps to the same class modulo a gamma-stable subspace.
PolyVec eigen_average(const ReflectionCoset& c, const ModuleRep& m, const PolyVec& v0,
                      const RootOfUnity& eps) {
  i64 n = c.gamma_order();
  i64 md = static_cast<i64>(v0.size());
  i64 nvars = c.dim();
  PolyVec acc(md, MultiPoly(nvars));
  PolyVec cur = v0;
  CycMatrix gamma_inv = c.gamma_power(-1);
  CycMatrix mdual = m.act(gamma_inv).transpose();
  for (i64 j = 0; j < n; ++j) {
    RootOfUnity w = eps.pow(-j);
    polyvec_add(acc, cur, Cyclotomic::from_root(w, lcm_i64(w.order(), 1)));
    if (j + 1 < n) cur = act_polyvec(gamma_inv, mdual, cur);
  }
  Cyclotomic inv(Rational(1, static_cast<unsigned long>(n)));
  for (auto& q : acc) q = q.scaled(inv);
  return acc;
}

// chooses a gamma-eigenbasis of W/U and returns the lifted eigen elements
std::vector<std::pair<PolyVec, RootOfUnity>> quotient_eigen_lift(
    const ReflectionCoset& c, const ModuleRep& m, const std::vector<PolyVec>& w,
    const std::vector<PolyVec>& u) {
  i64 md = m.dim(c.dim());
  Echelon eu;
  for (const auto& x : u) eu.insert(to_svec(x));
  // class representatives: W reduced mod U, echelonized
  Echelon ec;
  std::vector<PolyVec> reps;
  for (const auto& x : w) {
    SVec red = to_svec(x);
    eu.reduce(red, nullptr);
    if (red.empty()) continue;
    Echelon probe = ec;  // cheap enough at these sizes
    if (probe.insert(red)) {
      ec.insert(red);
      reps.push_back(from_svec(red, c.dim(), md));
    }
  }
  i64 q = static_cast<i64>(reps.size());
  std::vector<std::pair<PolyVec, RootOfUnity>> out;
  if (q == 0) return out;
  // gamma action matrix on the quotient in rep coordinates
  CycMatrix gamma_inv = c.gamma_power(-1);
  CycMatrix mdual = m.act(gamma_inv).transpose();
  CycMatrix abar(q, q, c.conductor());
  for (i64 t = 0; t < q; ++t) {
    PolyVec img = act_polyvec(gamma_inv, mdual, reps[t]);
    SVec red = to_svec(img);
    eu.reduce(red, nullptr);
    auto coords = ec.express(std::move(red));
    if (!coords) throw harmonics_error("gamma image escapes the quotient space");
    for (i64 s = 0; s < q; ++s) abar.set(s, t, (*coords)[s]);
  }
  auto eig = eigen_multiset(abar, c.gamma_order() + 1);
  for (const auto& [eps, mult] : eig) {
    i64 big = lcm_i64(c.conductor(), eps.order());
    CycMatrix shifted = abar.embedded(big) - CycMatrix::scalar(q, Cyclotomic::from_root(eps, big));
    auto kern = kernel(shifted);
    if (static_cast<i64>(kern.size()) != mult)
      throw harmonics_error("quotient eigenspace dimension mismatch");
    for (const auto& beta : kern) {
      PolyVec v0(md, MultiPoly(c.dim()));
      for (i64 t = 0; t < q; ++t) {
        if (beta[t].is_zero()) continue;
        polyvec_add(v0, reps[t], beta[t]);
      }
      PolyVec v = eigen_average(c, m, v0, eps);
      // exact eigen check
      PolyVec gv = act_polyvec(gamma_inv, mdual, v);
      PolyVec ev = v;
      Cyclotomic epsc = Cyclotomic::from_root(eps, eps.order());
      for (auto& p : ev) p = p.scaled(epsc);
      if (!polyvec_equal(gv, ev)) throw harmonics_error("lifted element is not a gamma eigenvector");
      out.push_back({std::move(v), eps});
    }
  }
  return out;
}

BasicInvariants compute_basic_invariants(const ReflectionCoset& c) {
  const ReflectionGroup& g = c.group();
  i64 r = g.dim();
  const FactorSet& vf = v_factors(c);
  i64 nrefl = static_cast<i64>(g.reflections().size());
  BasicInvariants out;
  BasicProducts products;
  products.items = &out.items;
  Echelon chosen;  // spans U_d + chosen at each degree, rebuilt per degree

  i64 prod_deg = 1;
  ModuleRep triv = ModuleRep::trivial();
  for (i64 d = 1; d <= nrefl + 1 && prod_deg < g.order(); ++d) {
    i64 cd = invariant_dimension(g, triv, d);
    if (cd == 0) continue;
    auto w = invariant_space(g, triv, d);
    std::vector<std::vector<int>> alphas;
    products.enumerate(d, 2, alphas);
    std::vector<PolyVec> u;
    for (const auto& a : alphas) u.push_back({products.power_product(a)});
    auto lifted = quotient_eigen_lift(c, triv, w, u);
    for (auto& [pv, eps] : lifted) {
      out.items.push_back({pv[0], d, eps});
      prod_deg *= d;
    }
  }
  if (prod_deg != g.order())
    throw harmonics_error("basic invariant degrees do not multiply to |G|");
  std::sort(out.items.begin(), out.items.end(), [](const BasicInvariant& a, const BasicInvariant& b) {
    return std::tie(a.degree, a.eps) < std::tie(b.degree, b.eps);
  });
  // cross-checks: multiset against v_factors
  {
    std::vector<std::pair<i64, RootOfUnity>> got, want;
    for (const auto& b : out.items) got.push_back({b.degree, b.eps});
    for (const auto& f : vf.items) want.push_back({f.d(), f.eps});
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    if (got != want) throw harmonics_error("basic invariant (d, eps) multiset disagrees with V-factors");
  }
  // Jacobian criterion: det(dP_i/dX_j) is a nonzero constant multiple of Psi_V
  {
    std::vector<std::vector<MultiPoly>> jac(r, std::vector<MultiPoly>(r, MultiPoly(r)));
    for (i64 i = 0; i < r; ++i)
      for (i64 j = 0; j < r; ++j) jac[i][j] = out.items[i].p.partial(j);
    MultiPoly jdet = MultiPoly::constant(r, Cyclotomic(1));
    // Laplace along rows via permanent-style recursion
    std::function<MultiPoly(i64, std::vector<bool>&)> go = [&](i64 row, std::vector<bool>& used) {
      MultiPoly acc(r);
      if (row == r) return MultiPoly::constant(r, Cyclotomic(1));
      i64 skipped = 0;
      for (i64 j = 0; j < r; ++j) {
        if (used[j]) continue;
        if (!jac[row][j].is_zero()) {
          used[j] = true;
          MultiPoly sub = go(row + 1, used);
          used[j] = false;
          MultiPoly term = jac[row][j] * sub;
          if (skipped % 2 == 1) term = -term;
          acc += term;
        }
        ++skipped;
      }
      return acc;
    };
    std::vector<bool> used(r, false);
    jdet = go(0, used);
    if (jdet.is_zero()) throw harmonics_error("Jacobian of basic invariants vanishes");
    MultiPoly psi = psi_polynomial(g, ModuleRep::defining());
    auto quot = jdet.divide_exact(psi);
    if (!quot || quot->total_degree() != 0)
      throw harmonics_error("Jacobian is not a constant multiple of Psi_V");
  }
  return out;
}

HarmonicsCacheEntry& cache_entry(const ReflectionCoset& c) {
  std::lock_guard<std::mutex> lock(harm_mutex);
  HarmonicsCacheEntry& e = harm_cache[coset_key(c)];
  if (!e.pin) e.pin = c.group_ptr();
  return e;
}

}  // namespace

std::vector<i64> BasicInvariants::degrees() const {
  std::vector<i64> v;
  for (const auto& b : items) v.push_back(b.degree);
  return v;
}

const BasicInvariants& basic_invariants(const ReflectionCoset& c) {
  HarmonicsCacheEntry& e = cache_entry(c);
  {
    std::lock_guard<std::mutex> lock(harm_mutex);
    if (e.basics) return *e.basics;
  }
  BasicInvariants b = compute_basic_invariants(c);
  std::lock_guard<std::mutex> lock(harm_mutex);
  if (!e.basics) e.basics = std::move(b);
  return *e.basics;
}

HarmonicBasis harmonic_module_basis(const ReflectionCoset& c, const ModuleRep& m) {
  {
    HarmonicsCacheEntry& e = cache_entry(c);
    std::lock_guard<std::mutex> lock(harm_mutex);
    auto it = e.bases.find(m.tag());
    if (it != e.bases.end()) return it->second;
  }
  const ReflectionGroup& g = c.group();
  i64 md = m.dim(g.dim());
  i64 depth = n_of_module(g, m);
  const BasicInvariants& basics = basic_invariants(c);
  BasicProducts products;
  products.items = &basics.items;

  HarmonicBasis out;
  out.module_tag = m.tag();
  i64 expsum = 0;
  for (i64 d = 0; d <= depth + 1 && static_cast<i64>(out.items.size()) < md; ++d) {
    i64 cd = invariant_dimension(g, m, d);
    if (cd == 0) continue;
    auto w = invariant_space(g, m, d);
    std::vector<PolyVec> u;
    for (const auto& el : out.items) {
      if (el.degree >= d) continue;
      std::vector<std::vector<int>> alphas;
      products.enumerate(d - el.degree, 1, alphas);
      for (const auto& a : alphas) {
        const MultiPoly& b = products.power_product(a);
        PolyVec prod(md, MultiPoly(g.dim()));
        for (i64 t = 0; t < md; ++t)
          if (!el.components[t].is_zero()) prod[t] = b * el.components[t];
        u.push_back(std::move(prod));
      }
    }
    auto lifted = quotient_eigen_lift(c, m, w, u);
    for (auto& [pv, eps] : lifted) {
      out.items.push_back({std::move(pv), d, eps});
      expsum += d;
    }
  }
  if (static_cast<i64>(out.items.size()) != md)
    throw harmonics_error("harmonic basis cardinality != dim M for " + m.tag());
  if (expsum != depth) throw harmonics_error("harmonic basis exponent sum != N(M) for " + m.tag());
  std::sort(out.items.begin(), out.items.end(), [](const HarmonicElement& a, const HarmonicElement& b) {
    return std::tie(a.degree, a.eps) < std::tie(b.degree, b.eps);
  });
  // hard cross-check against the Molien route
  {
    FactorSet mf = module_factors(c, m);
    std::vector<std::pair<i64, RootOfUnity>> got, want;
    for (const auto& el : out.items) got.push_back({el.degree, el.eps});
    for (const auto& f : mf.items) want.push_back({f.m, f.eps});
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    if (got != want)
      throw harmonics_error("harmonic basis multiset disagrees with module_factors for " + m.tag());
  }
  HarmonicsCacheEntry& e = cache_entry(c);
  std::lock_guard<std::mutex> lock(harm_mutex);
  return e.bases.emplace(m.tag(), std::move(out)).first->second;
}

namespace {

MultiPoly poly_det(const std::vector<std::vector<MultiPoly>>& a, i64 nvars) {
  i64 n = static_cast<i64>(a.size());
  std::function<MultiPoly(i64, std::vector<bool>&)> go = [&](i64 row, std::vector<bool>& used) {
    if (row == n) return MultiPoly::constant(nvars, Cyclotomic(1));
    MultiPoly acc(nvars);
    i64 skipped = 0;
    for (i64 j = 0; j < n; ++j) {
      if (used[j]) continue;
      if (!a[row][j].is_zero()) {
        used[j] = true;
        MultiPoly sub = go(row + 1, used);
        used[j] = false;
        MultiPoly term = a[row][j] * sub;
        if (skipped % 2 == 1) term = -term;
        acc += term;
      }
      ++skipped;
    }
    return acc;
  };
  std::vector<bool> used(n, false);
  return go(0, used);
}

}  // namespace

Cyclotomic gutkin_check(const ReflectionCoset& c, const ModuleRep& m) {
  const ReflectionGroup& g = c.group();
  HarmonicBasis basis = harmonic_module_basis(c, m);
  i64 md = m.dim(g.dim());
  std::vector<std::vector<MultiPoly>> q(md, std::vector<MultiPoly>(md, MultiPoly(g.dim())));
  for (i64 i = 0; i < md; ++i)
    for (i64 t = 0; t < md; ++t) q[i][t] = basis.items[i].components[t];
  MultiPoly wedge = poly_det(q, g.dim());
  if (wedge.is_zero()) throw harmonics_error("wedge of harmonic basis vanishes");
  MultiPoly psi = psi_polynomial(g, m);
  auto quot = wedge.divide_exact(psi);
  if (!quot || quot->total_degree() != 0)
    throw harmonics_error("Gutkin wedge is not a constant multiple of Psi_M");
  return quot->terms().begin()->second;
}

DiscMatrixResult disc_matrix(const ReflectionCoset& c, const ModuleRep& m) {
  const ReflectionGroup& g = c.group();
  i64 md = m.dim(g.dim());
  ModuleRep mdual = ModuleRep::dual(m);
  HarmonicBasis bm = harmonic_module_basis(c, m);
  HarmonicBasis bmd = harmonic_module_basis(c, mdual);
  DiscMatrixResult res;
  res.entries.assign(md, std::vector<MultiPoly>(md, MultiPoly(g.dim())));
  for (i64 i = 0; i < md; ++i)
    for (i64 j = 0; j < md; ++j) {
      MultiPoly s(g.dim());
      for (i64 t = 0; t < md; ++t) s += bm.items[i].components[t] * bmd.items[j].components[t];
      res.entries[i][j] = std::move(s);
    }
  // invariance and gamma-equivariance checks
  for (i64 gi : g.generator_indices()) {
    CycMatrix ginv = g.element(g.inverse_index(gi));
    for (i64 i = 0; i < md; ++i)
      for (i64 j = 0; j < md; ++j)
        if (!(res.entries[i][j].subst_linear(ginv) == res.entries[i][j]))
          throw harmonics_error("pairing entry is not G-invariant");
  }
  CycMatrix gamma_inv = c.gamma_power(-1);
  for (i64 i = 0; i < md; ++i)
    for (i64 j = 0; j < md; ++j) {
      RootOfUnity e = bm.items[i].eps * bmd.items[j].eps;
      MultiPoly lhs = res.entries[i][j].subst_linear(gamma_inv);
      MultiPoly rhs = res.entries[i][j].scaled(Cyclotomic::from_root(e, e.order()));
      if (!(lhs == rhs)) throw harmonics_error("gamma(M_ij) != eps_i eps_j M_ij");
    }
  res.delta = poly_det(res.entries, g.dim());
  if (res.delta.is_zero()) throw harmonics_error("discriminant vanishes");
  MultiPoly psi = psi_polynomial(g, m) * psi_polynomial(g, mdual);
  auto quot = res.delta.divide_exact(psi);
  if (!quot || quot->total_degree() != 0)
    throw harmonics_error("Delta_M is not a constant multiple of Psi_M Psi_M*");
  res.psi_ratio = quot->terms().begin()->second;
  return res;
}

const MultiPoly& discriminant(const ReflectionCoset& c) {
  HarmonicsCacheEntry& e = cache_entry(c);
  {
    std::lock_guard<std::mutex> lock(harm_mutex);
    if (e.delta) return *e.delta;
  }
  MultiPoly d = disc_matrix(c, ModuleRep::defining()).delta;
  std::lock_guard<std::mutex> lock(harm_mutex);
  if (!e.delta) e.delta = std::move(d);
  return *e.delta;
}

MultiPoly express_in_basics(const MultiPoly& f, const BasicInvariants& basics) {
  i64 deg = f.total_degree();
  if (deg < 0) return MultiPoly(static_cast<i64>(basics.items.size()));
  if (!f.is_homogeneous(deg)) throw harmonics_error("express_in_basics needs a homogeneous input");
  BasicProducts products;
  products.items = &basics.items;
  std::vector<std::vector<int>> alphas;
  products.enumerate(deg, 0, alphas);
  Echelon probe;
  std::vector<std::vector<int>> used_alphas;
  for (const auto& a : alphas) {
    const MultiPoly& p = products.power_product(a);
    if (p.is_zero()) continue;
    if (probe.insert(to_svec({p}))) used_alphas.push_back(a);
  }
  // rebuild with only the independent products so coordinates line up
  Echelon clean;
  for (const auto& a : used_alphas) clean.insert(to_svec({products.power_product(a)}));
  auto coords = clean.express(to_svec({f}));
  if (!coords) throw harmonics_error("invariant is not a polynomial in the basic invariants");
  MultiPoly out(static_cast<i64>(basics.items.size()));
  for (size_t i = 0; i < used_alphas.size(); ++i)
    out.add_term(used_alphas[i], (*coords)[i]);
  // substitution check
  MultiPoly back(f.nvars());
  for (const auto& [a, coef] : out.terms()) {
    std::vector<int> av(a.begin(), a.end());
    back += products.power_product(av).scaled(coef);
  }
  if (!(back == f)) throw harmonics_error("express_in_basics substitution check failed");
  return out;
}

bool ideal_regularity(const ReflectionCoset& c, const RootOfUnity& zeta) {
  HarmonicsCacheEntry& e = cache_entry(c);
  const BasicInvariants& basics = basic_invariants(c);
  MultiPoly expr(static_cast<i64>(basics.items.size()));
  bool have = false;
  {
    std::lock_guard<std::mutex> lock(harm_mutex);
    if (e.delta_expr) {
      expr = *e.delta_expr;
      have = true;
    }
  }
  if (!have) {
    MultiPoly computed = express_in_basics(discriminant(c), basics);
    std::lock_guard<std::mutex> lock(harm_mutex);
    if (!e.delta_expr) e.delta_expr = computed;
    expr = *e.delta_expr;
  }
  // substitute 0 for P_i with eps_i zeta^{d_i} != 1
  std::vector<bool> killed(basics.items.size(), false);
  for (size_t i = 0; i < basics.items.size(); ++i) {
    RootOfUnity s = basics.items[i].eps * zeta.pow(basics.items[i].degree);
    killed[i] = !s.is_one();
  }
  bool survives = false;
  for (const auto& [a, coef] : expr.terms()) {
    bool hit = false;
    for (size_t i = 0; i < killed.size(); ++i)
      if (killed[i] && a[i] > 0) hit = true;
    if (!hit) {
      survives = true;
      break;
    }
  }
  bool crit = is_regular_criterion(c, zeta);
  auto oracle = is_regular_oracle(c, zeta);
  if (survives != crit || survives != oracle.has_value())
    throw harmonics_error("ideal route disagrees with criterion/oracle at zeta = " + zeta.str());
  return survives;
}

WellGenReport wellgen_structure(const ReflectionCoset& c) {
  const ReflectionGroup& g = c.group();
  i64 r = g.dim();
  if (!is_irreducible_group_module(g))
    throw harmonics_error("wellgen_structure needs an irreducible group");
  WellGenReport rep;
  const FactorSet& vf = v_factors(c);
  const FactorSet& cf = codegree_factors(c);
  std::vector<i64> d = vf.degrees();
  std::vector<i64> ds = cf.codegrees();
  std::sort(ds.rbegin(), ds.rend());
  i64 dr = d.back();
  rep.by_degrees = true;
  for (i64 i = 0; i < r; ++i)
    if (d[i] + ds[i] != dr) rep.by_degrees = false;

  // exhaustive search over reflection subsets for a generating set
  const auto& refl = g.reflections();
  i64 nrefl = static_cast<i64>(refl.size());
  CycMatrix id = CycMatrix::identity(r, g.conductor());
  auto generates = [&](const std::vector<i64>& subset) {
    // prune: no common fixed vector
    std::vector<CycVector> rows;
    for (i64 s : subset) {
      CycMatrix dmat = g.element(s) - id;
      for (i64 i = 0; i < r; ++i) {
        CycVector row;
        for (i64 j = 0; j < r; ++j) row.push_back(dmat.at(i, j));
        rows.push_back(std::move(row));
      }
    }
    CycMatrix stacked = CycMatrix::from_rows(rows);
    if (rank(stacked) < r) return false;
    return static_cast<i64>(g.subgroup_closure(subset).size()) == g.order();
  };
  i64 found_size = 0;
  for (i64 size = r; size <= nrefl && found_size == 0; ++size) {
    std::vector<i64> idx(size);
    for (i64 i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      std::vector<i64> subset;
      for (i64 i : idx) subset.push_back(refl[i]);
      if (generates(subset)) {
        found_size = size;
        break;
      }
      i64 i = size - 1;
      while (i >= 0 && idx[i] == nrefl - size + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (i64 j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  if (found_size == 0) throw harmonics_error("no reflection subset generates the group");
  rep.min_generating_size = found_size;
  rep.by_search = (found_size == r);
  if (rep.by_degrees != rep.by_search)
    throw harmonics_error("well-generation: degree condition and generator search disagree");
  if (!rep.by_degrees) return rep;

  // from here on: well-generated case
  // eps_r = eigenvalue at the (unique) top degree
  std::vector<Factor> top;
  for (const auto& f : vf.items)
    if (f.d() == dr) top.push_back(f);
  if (top.size() != 1) throw harmonics_error("top degree is not simple");
  RootOfUnity eps_r = top[0].eps;

  // (v) r d_r = N + N*
  i64 nn = vf.exponent_sum() + cf.exponent_sum();
  if (r * dr != nn) throw harmonics_error("r d_r != N + N* on a well-generated coset");

  // sigma matching: per degree class, {eps_i^{-1} eps_r} == {eps*_j at codegree d_r - d}
  rep.sigma_matching_ok = true;
  {
    std::set<i64> degs(d.begin(), d.end());
    for (i64 delta : degs) {
      std::vector<RootOfUnity> a, b;
      for (const auto& f : vf.items)
        if (f.d() == delta) a.push_back(f.eps.inverse() * eps_r);
      for (const auto& f : cf.items)
        if (f.dstar() == dr - delta) b.push_back(f.eps);
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) rep.sigma_matching_ok = false;
    }
  }

  // zeta with zeta^{d_r} = eps_r^{-1} is regular
  {
    i64 q = eps_r.order();
    RootOfUnity zeta(q * dr, -eps_r.exp());
    if (!(zeta.pow(dr) * eps_r).is_one())
      throw harmonics_error("constructed Coxeter-type zeta fails its defining equation");
    rep.coxeter_zeta = zeta;
    bool crit = is_regular_criterion(c, zeta);
    auto oracle = is_regular_oracle(c, zeta);
    if (crit != oracle.has_value())
      throw harmonics_error("criterion/oracle disagreement for the Coxeter-type zeta");
    rep.coxeter_zeta_regular = crit;
    // Cor. "monicreg" multisets
    std::vector<RootOfUnity> a, b;
    for (const auto& f : vf.items) a.push_back(f.eps * zeta.pow(f.d()));
    for (const auto& f : cf.items) b.push_back((f.eps * zeta.pow(f.dstar())).inverse());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    rep.multiset_ok = (a == b);
  }

  // discriminant-matrix structure (feasible tier: callers gate by rank)
  if (r <= 4) {
    const BasicInvariants& basics = basic_invariants(c);
    DiscMatrixResult dm = disc_matrix(c, ModuleRep::defining());
    HarmonicBasis bm = harmonic_module_basis(c, ModuleRep::defining());
    HarmonicBasis bmd = harmonic_module_basis(c, ModuleRep::dual(ModuleRep::defining()));
    // index of P_r among basics (unique top degree)
    i64 pr_index = -1;
    for (i64 i = 0; i < r; ++i)
      if (basics.items[i].degree == dr) pr_index = i;
    MultiPoly delta_unused = dm.delta;  // ensures delta available
    rep.disc_reduction_ok = true;
    CycMatrix cmat(r, r, c.conductor());
    for (i64 i = 0; i < r; ++i)
      for (i64 j = 0; j < r; ++j) {
        MultiPoly expr = express_in_basics(dm.entries[i][j], basics);
        // reduce mod I_0 = (P_k : k != pr_index)
        Cyclotomic cij(0);
        for (const auto& [a, coef] : expr.terms()) {
          bool in_i0 = false;
          for (i64 k = 0; k < r; ++k)
            if (k != pr_index && a[k] > 0) in_i0 = true;
          if (in_i0) continue;
          if (a[pr_index] != 1) {
            rep.disc_reduction_ok = false;  // entries must reduce to multiples of P_r
            continue;
          }
          cij = add_any(cij, coef);
        }
        i64 di = bm.items[i].degree + 1;        // d_i
        i64 dsj = bmd.items[j].degree - 1;      // d*_j
        if (di + dsj != dr && !cij.is_zero()) rep.disc_reduction_ok = false;
        cmat.set(i, j, cij.embedded(lcm_i64(cij.conductor(), c.conductor())));
      }
    if (det(cmat).is_zero()) rep.disc_reduction_ok = false;
    // block nonsingularity per degree class
    std::set<i64> degs(d.begin(), d.end());
    for (i64 delta : degs) {
      std::vector<i64> ris, cjs;
      for (i64 i = 0; i < r; ++i)
        if (bm.items[i].degree + 1 == delta) ris.push_back(i);
      for (i64 j = 0; j < r; ++j)
        if (bmd.items[j].degree - 1 == dr - delta) cjs.push_back(j);
      if (ris.size() != cjs.size()) {
        rep.disc_reduction_ok = false;
        continue;
      }
      CycMatrix block(static_cast<i64>(ris.size()), static_cast<i64>(cjs.size()), c.conductor());
      for (size_t a = 0; a < ris.size(); ++a)
        for (size_t b = 0; b < cjs.size(); ++b) block.set(a, b, cmat.at(ris[a], cjs[b]));
      if (det(block).is_zero()) rep.disc_reduction_ok = false;
    }
    // monic in P_r: the pure power P_r^{(N+N*)/d_r} appears in Delta
    MultiPoly dexpr = express_in_basics(dm.delta, basics);
    i64 k = nn / dr;
    rep.monic_ok = false;
    for (const auto& [a, coef] : dexpr.terms()) {
      bool pure = (a[pr_index] == k);
      for (i64 t = 0; t < r && pure; ++t)
        if (t != pr_index && a[t] != 0) pure = false;
      if (pure && !coef.is_zero()) rep.monic_ok = true;
    }
  }
  return rep;
}

}  // namespace refl
