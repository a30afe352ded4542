#include "refl/coinv.hpp"

#include <algorithm>

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

UniPoly degrees_poly(const std::vector<i64>& degrees) {
  UniPoly p = UniPoly::constant(Cyclotomic(1));
  for (i64 d : degrees)
    p = p * (UniPoly::constant(Cyclotomic(1)) - UniPoly::monomial(Cyclotomic(1), d));
  return p;
}

// graded trace of the element with index x on the harmonics of g:
// prod(1 - t^{d_i}) / det(1 - t x|V*), a polynomial of degree <= N.
UniPoly harmonic_trace(const ReflectionGroup& g, const UniPoly& dpoly, i64 n_top, i64 x) {
  const CycMatrix& inv = g.element(g.inverse_index(x));
  TruncSeries s = TruncSeries::from_poly(char_series(inv), n_top + 2).invert();
  auto poly = s.mul_poly(dpoly).as_polynomial(n_top);
  if (!poly) throw coinv_error("harmonic graded trace is not a polynomial of degree N");
  return *poly;
}

}  // namespace

GradedCharacter coinvariant_character(const ReflectionCoset& c) {
  const ReflectionGroup& g = c.group();
  std::vector<i64> degrees = degrees_of(c);
  i64 n_top = 0;
  for (i64 d : degrees) n_top += d - 1;
  UniPoly dpoly = degrees_poly(degrees);
  GradedCharacter out;
  out.values.assign(n_top + 1, std::vector<Cyclotomic>(g.classes().size(), Cyclotomic(0)));
  for (size_t cl = 0; cl < g.classes().size(); ++cl) {
    UniPoly tr = harmonic_trace(g, dpoly, n_top, g.classes()[cl].rep);
    for (i64 i = 0; i <= n_top; ++i) out.values[i][cl] = tr.coeff(i);
  }
  // regular-character identity: sum_i chi_{H_i} = chi_{K[G]}
  for (size_t cl = 0; cl < g.classes().size(); ++cl) {
    Cyclotomic total(0);
    for (i64 i = 0; i <= n_top; ++i) total = add_any(total, out.values[i][cl]);
    bool is_id = g.classes()[cl].rep == g.identity_index();
    Cyclotomic want = is_id ? Cyclotomic(g.order()) : Cyclotomic(0);
    if (!(total == want)) throw coinv_error("coinvariant characters do not sum to the regular character");
  }
  return out;
}

bool eqdims_check(const ReflectionCoset& c, i64 d, i64 k, i64 l) {
  std::vector<i64> degrees = degrees_of(c);
  bool divides = false;
  for (i64 dg : degrees)
    if (dg % d == 0) divides = true;
  if (!divides) throw coinv_error("d divides no degree");
  GradedCharacter gc = coinvariant_character(c);
  i64 id_class = c.group().class_of(c.group().identity_index());
  auto residue_sum = [&](i64 res) {
    Cyclotomic s(0);
    for (i64 i = 0; i <= gc.top_degree(); ++i)
      if (mod_pos(i + res, d) == 0) s = add_any(s, gc.values[i][id_class]);
    return s;
  };
  return residue_sum(k) == residue_sum(l);
}

bool poincare_divisibility(const ReflectionCoset& c) {
  GradedCharacter gc = coinvariant_character(c);
  i64 id_class = c.group().class_of(c.group().identity_index());
  std::vector<Cyclotomic> pc;
  for (i64 i = 0; i <= gc.top_degree(); ++i) pc.push_back(gc.values[i][id_class]);
  UniPoly poincare(pc);
  for (i64 d : degrees_of(c)) {
    // (1 - t^d)/(1 - t) = 1 + t + ... + t^{d-1}
    std::vector<Cyclotomic> q(d, Cyclotomic(1));
    UniPoly div(q);
    // exact division check
    UniPoly rem = poincare;
    std::vector<Cyclotomic> quot(std::max<i64>(rem.degree() - div.degree() + 1, 0), Cyclotomic(0));
    while (rem.degree() >= div.degree() && !rem.is_zero()) {
      i64 shift = rem.degree() - div.degree();
      Cyclotomic cfac = mul_any(rem.coeff(rem.degree()), div.coeff(div.degree()).inverse());
      quot[shift] = cfac;
      UniPoly sub = div * UniPoly::monomial(cfac, shift);
      rem = rem - sub;
    }
    if (!rem.is_zero()) return false;
  }
  return true;
}

bool induction_check(const ReflectionCoset& c, i64 gamma_index, const CycVector& v, i64 k) {
  const ReflectionGroup& g = c.group();
  Cyclotomic theta_g = theta_v(g.element(gamma_index), v);
  auto zeta = as_root_of_unity(theta_g);
  if (!zeta) throw coinv_error("theta_v(gamma) is not a root of unity");
  i64 d = zeta->order();

  auto par = parabolic(g, v);
  // K = <G_v, gamma> as indices in G
  std::vector<i64> kgens = par.member_indices;
  kgens.push_back(gamma_index);
  std::vector<i64> kmembers = g.subgroup_closure(kgens);
  std::map<i64, i64> kpos;
  for (size_t i = 0; i < kmembers.size(); ++i) kpos[kmembers[i]] = static_cast<i64>(i);

  // theta_v on K, with the triviality assertion on G_v intersect <gamma>
  std::vector<Cyclotomic> theta(kmembers.size(), Cyclotomic(0));
  for (size_t i = 0; i < kmembers.size(); ++i) theta[i] = theta_v(g.element(kmembers[i]), v);
  {
    std::vector<bool> in_gv(g.order(), false);
    for (i64 x : par.member_indices) in_gv[x] = true;
    i64 cur = gamma_index;
    for (i64 a = 1; a <= g.order(); ++a) {
      if (in_gv[cur]) {
        Cyclotomic t = theta_v(g.element(cur), v);
        if (!(t == Cyclotomic(1))) throw coinv_error("theta_v not trivial on G_v intersect <gamma>");
      }
      if (cur == g.identity_index()) break;
      cur = g.product_index(cur, gamma_index);
    }
  }

  // graded trace of h on H_v:
  // [1/det(1 - t h|V*)] / [(1/|G_v|) sum_{x in G_v} 1/det(1 - t x h|V*)]
  i64 n_v = static_cast<i64>(par.fixing_reflections.size());
  // N(V) for G_v equals its reflection count
  std::vector<Cyclotomic> psi_values(kmembers.size(), Cyclotomic(0));
  for (size_t i = 0; i < kmembers.size(); ++i) {
    i64 h = kmembers[i];
    TruncSeries num =
        TruncSeries::from_poly(char_series(g.element(g.inverse_index(h))), n_v + 2).invert();
    TruncSeries den(n_v + 2);
    for (i64 x : par.member_indices) {
      i64 xh = g.product_index(x, h);
      den += TruncSeries::from_poly(char_series(g.element(g.inverse_index(xh))), n_v + 2).invert();
    }
    den = den.scaled(Cyclotomic(Rational(1, static_cast<unsigned long>(par.member_indices.size()))));
    TruncSeries ratio = num * den.invert();
    auto tr = ratio.as_polynomial(n_v);
    if (!tr) throw coinv_error("graded H_v trace is not a polynomial of degree N_v");
    // psi(h) = sum_j Tr(h|(H_v)_j) theta_v(h)^{j+k}
    Cyclotomic acc(0);
    for (i64 j = 0; j <= tr->degree(); ++j) {
      if (tr->coeff(j).is_zero()) continue;
      acc = add_any(acc, mul_any(tr->coeff(j), theta[i].pow(j + k)));
    }
    psi_values[i] = acc;
  }

  // LHS: sum over i = -k mod d of chi_{H_i}, as a class function
  GradedCharacter gc = coinvariant_character(c);
  i64 ncl = static_cast<i64>(g.classes().size());
  std::vector<Cyclotomic> lhs(ncl, Cyclotomic(0));
  for (i64 i = 0; i <= gc.top_degree(); ++i) {
    if (mod_pos(i + k, d) != 0) continue;
    for (i64 cl = 0; cl < ncl; ++cl) lhs[cl] = add_any(lhs[cl], gc.values[i][cl]);
  }

  // RHS: induced character Ind_K^G(psi)
  std::vector<Cyclotomic> rhs(ncl, Cyclotomic(0));
  for (i64 cl = 0; cl < ncl; ++cl) {
    i64 x = g.classes()[cl].rep;
    Cyclotomic acc(0);
    for (i64 a = 0; a < g.order(); ++a) {
      i64 conj = g.product_index(g.product_index(g.inverse_index(a), x), a);
      auto it = kpos.find(conj);
      if (it == kpos.end()) continue;
      acc = add_any(acc, psi_values[it->second]);
    }
    rhs[cl] = acc.scaled(Rational(1, static_cast<unsigned long>(kmembers.size())));
  }

  for (i64 cl = 0; cl < ncl; ++cl)
    if (!(lhs[cl] == rhs[cl])) return false;
  return true;
}

}  // namespace refl
