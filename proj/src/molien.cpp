#include "refl/molien.hpp"

#include <algorithm>

#include "refl/parallel.hpp"
#include <mutex>
#include <sstream>

namespace refl {

// ---------------------------------------------------------------------------
// FactorSet

i64 FactorSet::exponent_sum() const {
  i64 s = 0;
  for (const auto& f : items) s += f.m;
  return s;
}

std::vector<i64> FactorSet::degrees() const {
  std::vector<i64> d;
  for (const auto& f : items) d.push_back(f.d());
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<i64> FactorSet::codegrees() const {
  std::vector<i64> d;
  for (const auto& f : items) d.push_back(f.dstar());
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<i64> FactorSet::u_indices() const {
  std::vector<i64> out;
  for (i64 i = 0; i < size(); ++i)
    if (items[i].eps.is_one()) out.push_back(i);
  return out;
}

std::vector<i64> FactorSet::u_sharp_indices() const {
  std::vector<i64> out;
  for (i64 i = 0; i < size(); ++i)
    if (!items[i].eps.is_one()) out.push_back(i);
  return out;
}

bool FactorSet::same_multiset(const FactorSet& o) const {
  return items == o.items;  // both stored sorted
}

std::string FactorSet::str() const {
  std::ostringstream os;
  os << module_tag << ": ";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) os << ", ";
    os << "(m=" << items[i].m << ", eps=" << items[i].eps.str() << ")";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Molien series

TruncSeries molien_trace_series(const ReflectionCoset& c, const ModuleRep& m, i64 j, i64 bound) {
  const ReflectionGroup& g = c.group();
  // h = g*gamma^j runs over the coset; as x runs over G, h^{-1} = gamma^{-j} x.
  const CycMatrix& gmj = c.gamma_power(-j);
  // Tr(h|M*) = Tr(rho_M(h^{-1})) and det(1 - x h|V*) = det(1 - x h^{-1}|V),
  // so everything is computed from h^{-1} and the plain module functor.
  using Buckets = std::map<std::string, std::pair<i64, std::pair<UniPoly, Cyclotomic>>>;
  Buckets buckets = parallel_chunks<Buckets>(
      g.order(), Buckets{},
      [&](i64 lo, i64 hi) {
        Buckets local;
        for (i64 x = lo; x < hi; ++x) {
          CycMatrix hinv = gmj * g.element(x);
          UniPoly cs = char_series(hinv);
          Cyclotomic tr = m.act(hinv).trace();
          std::ostringstream key;
          for (i64 i = 0; i <= cs.degree(); ++i)
            key << cs.coeff(i).conductor() << "|" << cs.coeff(i).str() << ";";
          key << "#" << tr.conductor() << "|" << tr.str();
          auto it = local.find(key.str());
          if (it == local.end())
            local.emplace(key.str(),
                          std::make_pair(i64{1}, std::make_pair(std::move(cs), std::move(tr))));
          else
            it->second.first += 1;
        }
        return local;
      },
      [](Buckets& acc, Buckets& part) {
        for (auto& [k, v] : part) {
          auto it = acc.find(k);
          if (it == acc.end())
            acc.emplace(k, std::move(v));
          else
            it->second.first += v.first;
        }
      });
  TruncSeries acc(bound);
  for (const auto& [key, entry] : buckets) {
    const auto& [count, data] = entry;
    const auto& [cs, tr] = data;
    if (tr.is_zero()) continue;
    TruncSeries s = TruncSeries::from_poly(cs, bound).invert();
    Cyclotomic w = tr.scaled(Rational(count));
    acc += s.scaled(w);
  }
  return acc.scaled(Cyclotomic(Rational(1, static_cast<unsigned long>(g.order()))));
}

// ---------------------------------------------------------------------------
// N(M)

i64 n_h_of_module(const ReflectionGroup& g, const ModuleRep& m, const Hyperplane& h) {
  // Diagonalize the distinguished generator s of G_H on M*: its eigenvalues
  // are zeta_{e_H}^{e_i} with 0 <= e_i < e_H, and N_H(M) = sum e_i.
  // rho_{M*}(s) has the eigenvalues of rho_M(s^{-1}).
  i64 s_inv = g.inverse_index(h.distinguished);
  CycMatrix a = m.act(g.element(s_inv));
  auto eig = eigen_multiset(a);
  i64 total = 0;
  for (const auto& [lambda, mult] : eig) {
    if (h.e_H % lambda.order() != 0)
      throw molien_error("G_H eigenvalue order does not divide e_H");
    i64 e = lambda.exp() * (h.e_H / lambda.order());
    total += e * mult;
  }
  return total;
}

i64 n_of_module(const ReflectionGroup& g, const ModuleRep& m) {
  i64 n_gutkin = 0;
  for (const auto& h : g.arrangement()) n_gutkin += n_h_of_module(g, m, h);

  // closed formula: chi(1)|Ref|/2 + sum_s chi(s)/(det(s|V)-1)
  i64 r = g.dim();
  i64 nrefl = static_cast<i64>(g.reflections().size());
  Cyclotomic acc = Cyclotomic(Rational(m.dim(r) * nrefl, 2));
  for (i64 s : g.reflections()) {
    Cyclotomic chi = m.act(g.element(s)).trace();
    Cyclotomic den = Cyclotomic::from_root(g.det_of(s), g.conductor()) - Cyclotomic::one(g.conductor());
    auto [a, b] = aligned(chi, den);
    acc = acc.embedded(lcm_i64(acc.conductor(), a.conductor())) +
          (a / b).embedded(lcm_i64(acc.conductor(), a.conductor()));
  }
  if (!acc.is_integer()) throw molien_error("closed-formula N(M) is not an integer");
  i64 n_closed = static_cast<i64>(acc.rational_part().get_num().get_si());
  if (n_closed != n_gutkin)
    throw molien_error("N(M) routes disagree: gutkin=" + std::to_string(n_gutkin) +
                       " closed=" + std::to_string(n_closed));
  return n_gutkin;
}

MultiPoly psi_polynomial(const ReflectionGroup& g, const ModuleRep& m) {
  i64 r = g.dim();
  MultiPoly psi = MultiPoly::constant(r, Cyclotomic(1));
  for (const auto& h : g.arrangement()) {
    i64 nh = n_h_of_module(g, m, h);
    if (nh == 0) continue;
    MultiPoly lh(r);
    for (i64 j = 0; j < r; ++j) {
      if (h.normal[j].is_zero()) continue;
      MultiPoly::Exp e(r, 0);
      e[j] = 1;
      lh.add_term(e, h.normal[j]);
    }
    psi = psi * lh.pow(nh);
  }
  return psi;
}

// ---------------------------------------------------------------------------
// Factor extraction

namespace {

// DFT over j of the polynomial parts F_j; returns the factor multiset.
FactorSet dft_extract(const ReflectionCoset& c, const std::vector<UniPoly>& fj, i64 depth,
                      const std::string& tag, i64 dim_m) {
  i64 n = c.gamma_order();
  i64 big = lcm_i64(c.conductor(), n);
  std::vector<Cyclotomic> zpow(n, Cyclotomic::one(big));
  Cyclotomic z = Cyclotomic::root(big, big / n);
  for (i64 j = 1; j < n; ++j) zpow[j] = zpow[j - 1] * z;

  FactorSet fs;
  fs.module_tag = tag;
  i64 card = 0;
  for (i64 k = 0; k <= depth; ++k) {
    for (i64 s = 0; s < n; ++s) {
      Cyclotomic accu = Cyclotomic::zero(big);
      for (i64 j = 0; j < n; ++j) {
        Cyclotomic fk = fj[j].coeff(k);
        if (fk.is_zero()) continue;
        accu += zpow[mod_pos(-j * s, n)] * fk.embedded(big);
      }
      accu = accu.scaled(Rational(1, static_cast<unsigned long>(n)));
      if (accu.is_zero()) continue;
      if (!accu.is_integer())
        throw molien_error("factor DFT produced non-integral multiplicity (conductor or truncation bug)");
      i64 mult = static_cast<i64>(accu.rational_part().get_num().get_si());
      if (mult < 0) throw molien_error("factor DFT produced negative multiplicity");
      for (i64 t = 0; t < mult; ++t) fs.items.push_back({k, RootOfUnity(n, s)});
      card += mult;
    }
  }
  if (card != dim_m) throw molien_error("factor cardinality != dim M");
  std::sort(fs.items.begin(), fs.items.end());
  return fs;
}

// cache keyed by (group address, gamma key, module tag); each entry pins the
// group so its address cannot be recycled into another key
struct FactorCacheEntry {
  GroupPtr pin;
  FactorSet fs;
};
std::map<std::string, FactorCacheEntry> factor_cache;
std::mutex factor_mutex;

std::string coset_cache_key(const ReflectionCoset& c, const std::string& tag) {
  std::ostringstream os;
  os << static_cast<const void*>(&c.group()) << "/" << c.gamma().key() << "/" << tag;
  return os.str();
}

FactorSet compute_v_factors(const ReflectionCoset& c) {
  const ReflectionGroup& g = c.group();
  i64 r = g.dim();
  i64 n = c.gamma_order();
  ModuleRep mv = ModuleRep::defining();
  i64 depth = n_of_module(g, mv);  // = number of reflections
  i64 bound = depth + r + 2;

  std::vector<TruncSeries> aj;
  aj.reserve(n);
  for (i64 j = 0; j < n; ++j) aj.push_back(molien_trace_series(c, ModuleRep::trivial(), j, bound));

  // degrees by peeling 1/prod(1 - x^{d_i}) smallest-first
  std::vector<i64> degs;
  TruncSeries p = aj[0];
  for (i64 i = 0; i < r; ++i) {
    i64 d = -1;
    for (i64 k = 1; k <= bound; ++k)
      if (!p.coeff(k).is_zero()) {
        d = k;
        break;
      }
    if (d < 0) throw molien_error("degree extraction failed (series prematurely constant)");
    degs.push_back(d);
    UniPoly f({Cyclotomic(1)});
    f = f - UniPoly::monomial(Cyclotomic(1), d);
    p = p.mul_poly(f);
  }
  for (i64 k = 1; k <= bound; ++k)
    if (!p.coeff(k).is_zero()) throw molien_error("degree extraction left a nontrivial series");

  std::vector<UniPoly> fj(n);
  for (i64 j = 0; j < n; ++j) {
    TruncSeries tj = molien_trace_series(c, mv, j, bound);
    TruncSeries f = tj * aj[j].invert();
    auto poly = f.as_polynomial(depth);
    if (!poly) throw molien_error("twisted Molien quotient is not a polynomial of degree N(M)");
    fj[j] = *poly;
  }
  FactorSet fs = dft_extract(c, fj, depth, "V", r);
  if (fs.exponent_sum() != depth) throw molien_error("sum of V-exponents != N(V)");
  if (fs.degrees() != degs) throw molien_error("V-factor degrees disagree with Hilbert series degrees");
  if (!product_formula_holds(c, fs)) throw molien_error("product formula fails for V-factors");
  return fs;
}

}  // namespace

const FactorSet& v_factors(const ReflectionCoset& c) {
  std::string key = coset_cache_key(c, "V");
  {
    std::lock_guard<std::mutex> lock(factor_mutex);
    auto it = factor_cache.find(key);
    if (it != factor_cache.end()) return it->second.fs;
  }
  FactorSet fs = compute_v_factors(c);
  std::lock_guard<std::mutex> lock(factor_mutex);
  return factor_cache.emplace(key, FactorCacheEntry{c.group_ptr(), std::move(fs)})
      .first->second.fs;
}

FactorSet module_factors(const ReflectionCoset& c, const ModuleRep& m) {
  std::string key = coset_cache_key(c, m.tag());
  {
    std::lock_guard<std::mutex> lock(factor_mutex);
    auto it = factor_cache.find(key);
    if (it != factor_cache.end()) return it->second.fs;
  }
  const ReflectionGroup& g = c.group();
  i64 n = c.gamma_order();
  if (m.tag() == "V") return v_factors(c);

  const FactorSet& vf = v_factors(c);
  i64 depth = n_of_module(g, m);
  i64 margin = 0;
  for (const auto& f : vf.items) margin = std::max(margin, f.d());
  i64 bound = depth + std::max<i64>(margin, 2);

  std::vector<UniPoly> fj(n);
  for (i64 j = 0; j < n; ++j) {
    TruncSeries tj = molien_trace_series(c, m, j, bound);
    // multiply by prod_i (1 - eps_i^j x^{d_i}) = 1/A_j in closed form
    UniPoly prod({Cyclotomic(1)});
    for (const auto& f : vf.items) {
      i64 cc = lcm_i64(c.conductor(), f.eps.order());
      UniPoly fac({Cyclotomic::one(cc)});
      fac = fac - UniPoly::monomial(Cyclotomic::from_root(f.eps.pow(j), cc), f.d());
      prod = prod * fac;
    }
    TruncSeries ser = tj.mul_poly(prod);
    auto poly = ser.as_polynomial(depth);
    if (!poly) throw molien_error("twisted Molien quotient is not a polynomial of degree N(M) for " + m.tag());
    fj[j] = *poly;
  }
  FactorSet fs = dft_extract(c, fj, depth, m.tag(), m.dim(g.dim()));
  if (fs.exponent_sum() != depth) throw molien_error("sum of exponents != N(M) for " + m.tag());

  std::lock_guard<std::mutex> lock(factor_mutex);
  return factor_cache.emplace(key, FactorCacheEntry{c.group_ptr(), std::move(fs)})
      .first->second.fs;
}

const FactorSet& codegree_factors(const ReflectionCoset& c) {
  module_factors(c, ModuleRep::dual(ModuleRep::defining()));
  std::lock_guard<std::mutex> lock(factor_mutex);
  return factor_cache.at(coset_cache_key(c, "Vdual")).fs;
}

std::vector<i64> degrees_of(const ReflectionCoset& c) { return v_factors(c).degrees(); }

UniPoly fake_degree(const ReflectionCoset& c, const ModuleRep& m) {
  FactorSet fs = module_factors(c, m);
  i64 cc = c.conductor();
  for (const auto& f : fs.items) cc = lcm_i64(cc, f.eps.order());
  UniPoly out;
  for (const auto& f : fs.items)
    out = out + UniPoly::monomial(Cyclotomic::from_root(f.eps, cc), f.m);
  return out;
}

bool scaling_check(const ReflectionCoset& c, const ModuleRep& m, const RootOfUnity& z) {
  FactorSet base = module_factors(c, m);
  ReflectionCoset shifted = c.scalar_shift(z);
  FactorSet moved = module_factors(shifted, m);
  i64 cc = lcm_i64(c.conductor(), z.order());
  Cyclotomic zc = Cyclotomic::from_root(z, cc);
  auto zm = as_root_of_unity(m.scalar_action(zc, c.dim()));
  if (!zm) throw molien_error("scalar action is not a root of unity");
  FactorSet predicted;
  predicted.module_tag = moved.module_tag;
  for (const auto& f : base.items)
    predicted.items.push_back({f.m, *zm * z.pow(f.m) * f.eps});
  std::sort(predicted.items.begin(), predicted.items.end());
  return predicted.items == moved.items;
}

bool product_formula_holds(const ReflectionCoset& c, const FactorSet& vf) {
  const ReflectionGroup& g = c.group();
  // LHS as a multiset of linear factors (1 - w T): all eigenvalues of all
  // g*gamma acting on V^* (inverses of the V-eigenvalues), with multiplicity.
  std::map<RootOfUnity, i64> lhs;
  for (i64 x = 0; x < g.order(); ++x) {
    const SpectralData& d = c.spectral(x);
    for (const auto& [w, mult] : d.eigen) lhs[w.inverse()] += mult;
  }
  // RHS: (1 - eps T^d)^(|G|/d) contributes the d-th roots of eps, each with
  // multiplicity |G|/d.
  std::map<RootOfUnity, i64> rhs;
  for (const auto& f : vf.items) {
    i64 d = f.d();
    if (g.order() % d != 0) return false;
    i64 q = f.eps.order();
    for (i64 s = 0; s < d; ++s) {
      RootOfUnity w(d * q, f.eps.exp() + q * s);
      rhs[w] += g.order() / d;
    }
  }
  return lhs == rhs;
}

}  // namespace refl
