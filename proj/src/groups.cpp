#include "refl/groups.hpp"

#include <algorithm>
#include <deque>

namespace refl {

namespace {

// Covector spanning the row space of a rank-1 matrix, canonicalized so the
// first nonzero coordinate is 1. Used for L_H with m = s - 1.
CycVector row_space_generator(const CycMatrix& m) {
  for (i64 i = 0; i < m.rows(); ++i) {
    i64 j0 = -1;
    for (i64 j = 0; j < m.cols(); ++j)
      if (!m.at(i, j).is_zero()) {
        j0 = j;
        break;
      }
    if (j0 < 0) continue;
    Cyclotomic inv = m.at(i, j0).inverse();
    CycVector row(m.cols(), Cyclotomic::zero(m.conductor()));
    for (i64 j = 0; j < m.cols(); ++j) row[j] = m.at(i, j) * inv;
    return row;
  }
  throw group_error("zero matrix has no row-space generator");
}

std::string vector_key(const CycVector& v) {
  std::string s;
  for (const auto& x : v) {
    for (const auto& c : x.coeffs()) {
      s += c.get_str();
      s += ',';
    }
    s += ';';
  }
  return s;
}

}  // namespace

std::shared_ptr<const ReflectionGroup> ReflectionGroup::enumerate(
    const std::vector<CycMatrix>& gens, i64 cap) {
  if (gens.empty()) throw group_error("need at least one generator");
  i64 dim = gens[0].rows();
  i64 cond = 1;
  for (const auto& g : gens) {
    if (g.rows() != dim || g.cols() != dim)
      throw group_error("generators must be square matrices of equal size");
    cond = lcm_i64(cond, g.conductor());
  }
  std::vector<CycMatrix> gen_embedded;
  for (const auto& g : gens) gen_embedded.push_back(g.embedded(cond));

  // breadth-first closure with canonical-form dedup
  std::map<std::string, i64> seen;
  std::vector<CycMatrix> elems;
  std::deque<i64> queue;
  auto add = [&](const CycMatrix& m) -> i64 {
    std::string k = m.key();
    auto it = seen.find(k);
    if (it != seen.end()) return it->second;
    i64 idx = static_cast<i64>(elems.size());
    if (idx >= cap) throw group_error("group closure exceeds cap");
    seen.emplace(std::move(k), idx);
    elems.push_back(m);
    queue.push_back(idx);
    return idx;
  };
  add(CycMatrix::identity(dim, cond));
  for (const auto& g : gen_embedded) add(g);
  while (!queue.empty()) {
    i64 i = queue.front();
    queue.pop_front();
    CycMatrix cur = elems[i];
    for (const auto& g : gen_embedded) add(cur * g);
  }

  auto group = std::shared_ptr<ReflectionGroup>(new ReflectionGroup());
  group->dim_ = dim;
  group->conductor_ = cond;
  // canonical order: sort by dedup key
  std::vector<std::pair<std::string, i64>> order(elems.size());
  for (size_t i = 0; i < elems.size(); ++i) order[i] = {elems[i].key(), static_cast<i64>(i)};
  std::sort(order.begin(), order.end());
  group->elems_.reserve(elems.size());
  for (auto& [k, i] : order) {
    group->index_.emplace(k, static_cast<i64>(group->elems_.size()));
    group->elems_.push_back(std::move(elems[i]));
  }
  for (const auto& g : gen_embedded) group->gen_indices_.push_back(*group->index_of(g));
  group->build_derived();
  return group;
}

std::shared_ptr<const ReflectionGroup> ReflectionGroup::from_elements(
    std::vector<CycMatrix> elems, const std::vector<CycMatrix>& gens) {
  if (elems.empty()) throw group_error("empty element list");
  auto group = std::shared_ptr<ReflectionGroup>(new ReflectionGroup());
  group->dim_ = elems[0].rows();
  group->conductor_ = elems[0].conductor();
  std::vector<std::pair<std::string, i64>> order(elems.size());
  for (size_t i = 0; i < elems.size(); ++i) order[i] = {elems[i].key(), static_cast<i64>(i)};
  std::sort(order.begin(), order.end());
  group->elems_.reserve(elems.size());
  for (auto& [k, i] : order) {
    group->index_.emplace(k, static_cast<i64>(group->elems_.size()));
    group->elems_.push_back(std::move(elems[i]));
  }
  for (const auto& g : gens) {
    auto idx = group->index_of(g.embedded(group->conductor_));
    if (!idx) throw group_error("generator missing from element list");
    group->gen_indices_.push_back(*idx);
  }
  group->build_derived();
  return group;
}

void ReflectionGroup::build_derived() {
  const i64 n = order();
  const i64 r = dim_;
  CycMatrix id = CycMatrix::identity(r, conductor_);
  inv_.assign(n, -1);
  dets_.assign(n, RootOfUnity());
  for (i64 i = 0; i < n; ++i) {
    if (elems_[i].is_identity()) id_index_ = i;
    inv_[i] = *index_of(elems_[i].inverse());
    auto dz = as_root_of_unity(det(elems_[i]));
    if (!dz) throw group_error("element determinant is not a root of unity");
    dets_[i] = *dz;
  }
  if (id_index_ < 0) throw group_error("identity not found after closure");

  // reflections: fixed space of dimension r - 1
  std::map<std::string, i64> hyper_index;
  for (i64 i = 0; i < n; ++i) {
    if (i == id_index_) continue;
    CycMatrix d = elems_[i] - id;
    if (rank(d) != 1) continue;
    reflections_.push_back(i);
    CycVector normal = row_space_generator(d);
    std::string k = vector_key(normal);
    if (!hyper_index.count(k)) {
      Hyperplane h;
      h.normal = std::move(normal);
      h.basis = kernel(d);
      hyper_index.emplace(k, static_cast<i64>(arrangement_.size()));
      arrangement_.push_back(std::move(h));
    }
  }
  // pointwise stabilizers G_H
  for (auto& h : arrangement_) {
    for (i64 i = 0; i < n; ++i) {
      bool fixes = true;
      for (const auto& b : h.basis) {
        CycVector w = mat_vec(elems_[i], b);
        for (size_t t = 0; t < w.size(); ++t)
          if (!(w[t] == b[t])) {
            fixes = false;
            break;
          }
        if (!fixes) break;
      }
      if (h.basis.empty()) fixes = (i == id_index_) || rank(elems_[i] - id) <= 1;
      if (fixes) h.fixers.push_back(i);
    }
    h.e_H = static_cast<i64>(h.fixers.size());
    for (i64 i : h.fixers) {
      if (dets_[i] == RootOfUnity(h.e_H, 1)) {
        h.distinguished = i;
        break;
      }
    }
    if (h.distinguished < 0) throw group_error("no distinguished generator for hyperplane");
  }

  // conjugacy classes by orbit refinement under generator conjugation
  class_of_.assign(n, -1);
  for (i64 i = 0; i < n; ++i) {
    if (class_of_[i] >= 0) continue;
    i64 cls = static_cast<i64>(classes_.size());
    ConjClass cc;
    cc.rep = i;
    std::deque<i64> q{i};
    class_of_[i] = cls;
    while (!q.empty()) {
      i64 x = q.front();
      q.pop_front();
      cc.members.push_back(x);
      for (i64 s : gen_indices_) {
        CycMatrix t = elems_[inv_[s]] * elems_[x] * elems_[s];
        i64 y = *index_of(t);
        if (class_of_[y] < 0) {
          class_of_[y] = cls;
          q.push_back(y);
        }
      }
    }
    std::sort(cc.members.begin(), cc.members.end());
    classes_.push_back(std::move(cc));
  }
}

std::optional<i64> ReflectionGroup::index_of(const CycMatrix& m) const {
  const CycMatrix* q = &m;
  CycMatrix tmp;
  if (m.conductor() != conductor_) {
    if (conductor_ % m.conductor() != 0) {
      // group conductor does not contain the value; compare via common lcm
      i64 L = lcm_i64(conductor_, m.conductor());
      tmp = m.embedded(L);
      // brute-force comparison (rare path)
      for (i64 i = 0; i < order(); ++i)
        if (elems_[i].embedded(L) == tmp) return i;
      return std::nullopt;
    }
    tmp = m.embedded(conductor_);
    q = &tmp;
  }
  auto it = index_.find(q->key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

i64 ReflectionGroup::product_index(i64 a, i64 b) const {
  auto idx = index_of(elems_[a] * elems_[b]);
  if (!idx) throw group_error("product fell outside group (corrupt state)");
  return *idx;
}

i64 ReflectionGroup::exponent() const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!exponent_) {
    i64 e = 1;
    for (const auto& m : elems_) e = lcm_i64(e, element_order(m, order() + 1));
    exponent_ = e;
  }
  return *exponent_;
}

std::vector<i64> ReflectionGroup::subgroup_closure(const std::vector<i64>& gens) const {
  std::vector<bool> in(order(), false);
  std::deque<i64> q;
  auto add = [&](i64 i) {
    if (!in[i]) {
      in[i] = true;
      q.push_back(i);
    }
  };
  add(id_index_);
  for (i64 g : gens) add(g);
  while (!q.empty()) {
    i64 x = q.front();
    q.pop_front();
    for (i64 g : gens) add(product_index(x, g));
  }
  std::vector<i64> out;
  for (i64 i = 0; i < order(); ++i)
    if (in[i]) out.push_back(i);
  return out;
}

std::shared_ptr<const ReflectionGroup> ReflectionGroup::embedded(i64 bigger) const {
  if (bigger == conductor_) {
    // cheap copy through shared ownership is not possible here; rebuild
  }
  std::vector<CycMatrix> gens;
  for (i64 i : gen_indices_) gens.push_back(elems_[i].embedded(bigger));
  if (gens.empty()) gens.push_back(CycMatrix::identity(dim_, bigger));
  return enumerate(gens, order() + 1);
}

namespace {
// values pin the source group so its address is never recycled into a new key
std::map<std::pair<const ReflectionGroup*, i64>, std::pair<GroupPtr, GroupPtr>> embed_cache;
std::mutex embed_mutex;
}  // namespace

GroupPtr embedded_shared(const GroupPtr& g, i64 bigger) {
  if (bigger == g->conductor()) return g;
  std::pair<const ReflectionGroup*, i64> key{g.get(), bigger};
  {
    std::lock_guard<std::mutex> lock(embed_mutex);
    auto it = embed_cache.find(key);
    if (it != embed_cache.end()) return it->second.second;
  }
  GroupPtr e = g->embedded(bigger);
  std::lock_guard<std::mutex> lock(embed_mutex);
  return embed_cache.emplace(key, std::make_pair(g, std::move(e))).first->second.second;
}

ParabolicResult parabolic(const ReflectionGroup& g, const CycVector& v) {
  ParabolicResult res;
  for (i64 i : g.reflections()) {
    CycVector w = mat_vec(g.element(i), v);
    bool fixes = true;
    for (size_t t = 0; t < w.size(); ++t)
      if (!(w[t] == v[t])) {
        fixes = false;
        break;
      }
    if (fixes) res.fixing_reflections.push_back(i);
  }
  res.member_indices = g.subgroup_closure(res.fixing_reflections);
  std::vector<CycMatrix> gens;
  for (i64 i : res.fixing_reflections) gens.push_back(g.element(i));
  if (gens.empty()) gens.push_back(CycMatrix::identity(g.dim(), g.conductor()));
  res.group = ReflectionGroup::enumerate(gens, g.order() + 1);
  for (i64 i = 0; i < g.order(); ++i) {
    CycVector w = mat_vec(g.element(i), v);
    bool fixes = true;
    for (size_t t = 0; t < w.size(); ++t)
      if (!(w[t] == v[t])) {
        fixes = false;
        break;
      }
    if (fixes) res.pointwise_stabilizer.push_back(i);
  }
  res.steinberg_equal = res.pointwise_stabilizer == res.member_indices;
  return res;
}

Cyclotomic theta_v(const CycMatrix& m, const CycVector& v) {
  bool all_zero = true;
  for (const auto& x : v)
    if (!x.is_zero()) all_zero = false;
  if (all_zero) throw group_error("theta_v needs a nonzero vector");
  CycVector w = mat_vec(m, v);
  i64 L = 1;
  for (const auto& x : w) L = lcm_i64(L, x.conductor());
  for (const auto& x : v) L = lcm_i64(L, x.conductor());
  Cyclotomic theta = Cyclotomic::zero(L);
  bool found = false;
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    theta = w[i].embedded(L) / v[i].embedded(L);
    found = true;
    break;
  }
  if (!found) throw group_error("theta_v needs a nonzero vector");
  for (size_t i = 0; i < v.size(); ++i) {
    if (!(w[i].embedded(L) == theta * v[i].embedded(L)))
      throw group_error("vector is not an eigenvector");
  }
  return theta;
}

// ---------------------------------------------------------------------------
// ReflectionCoset

ReflectionCoset::ReflectionCoset(GroupPtr g, const CycMatrix& gamma, i64 order_cap)
    : group_(std::move(g)), gamma_(gamma) {
  n_ = element_order(gamma_, order_cap);
  i64 L = lcm_i64(lcm_i64(group_->conductor(), gamma_.conductor()), n_);
  if (L != group_->conductor()) group_ = embedded_shared(group_, L);
  gamma_ = gamma_.embedded(L);
  gamma_pow_.reserve(n_);
  CycMatrix p = CycMatrix::identity(group_->dim(), L);
  for (i64 j = 0; j < n_; ++j) {
    gamma_pow_.push_back(p);
    p = p * gamma_;
  }
  untwisted_ = group_->contains(gamma_);
  spectral_.assign(group_->order(), std::nullopt);
}

ReflectionCoset::ReflectionCoset(const ReflectionCoset& o)
    : group_(o.group_), gamma_(o.gamma_), n_(o.n_), untwisted_(o.untwisted_),
      gamma_pow_(o.gamma_pow_) {
  std::lock_guard<std::mutex> lock(o.mutex_);
  spectral_ = o.spectral_;
  coset_exponent_ = o.coset_exponent_;
}

ReflectionCoset& ReflectionCoset::operator=(const ReflectionCoset& o) {
  if (this == &o) return *this;
  group_ = o.group_;
  gamma_ = o.gamma_;
  n_ = o.n_;
  untwisted_ = o.untwisted_;
  gamma_pow_ = o.gamma_pow_;
  std::lock_guard<std::mutex> lock(o.mutex_);
  spectral_ = o.spectral_;
  coset_exponent_ = o.coset_exponent_;
  return *this;
}

const CycMatrix& ReflectionCoset::gamma_power(i64 j) const {
  return gamma_pow_[mod_pos(j, n_)];
}

ReflectionCoset ReflectionCoset::scalar_shift(const RootOfUnity& z) const {
  i64 L = lcm_i64(conductor(), z.order());
  Cyclotomic zi = Cyclotomic::from_root(z.inverse(), L);
  return coset_new(group_, gamma_.embedded(L).scaled(zi));
}

const SpectralData& ReflectionCoset::spectral(i64 g_index) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (spectral_[g_index]) return *spectral_[g_index];
  }
  CycMatrix h = group_->element(g_index) * gamma_pow_[mod_pos(1, n_)];
  SpectralData d;
  d.order = element_order(h, 1 << 20);
  d.eigen = eigen_multiset(h);
  auto dz = as_root_of_unity(det(h));
  if (!dz) throw group_error("coset element determinant is not a root of unity");
  d.det = *dz;
  auto it = d.eigen.find(RootOfUnity::one());
  d.fix_dim = it == d.eigen.end() ? 0 : it->second;
  std::lock_guard<std::mutex> lock(mutex_);
  if (!spectral_[g_index]) spectral_[g_index] = std::move(d);
  return *spectral_[g_index];
}

i64 ReflectionCoset::coset_exponent() const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!coset_exponent_) {
    i64 e = 1;
    const CycMatrix& g1 = gamma_pow_[mod_pos(1, n_)];
    for (i64 i = 0; i < group_->order(); ++i)
      e = lcm_i64(e, element_order(group_->element(i) * g1, 1 << 20));
    coset_exponent_ = e;
  }
  return *coset_exponent_;
}

ReflectionCoset coset_new(GroupPtr g, const CycMatrix& gamma, i64 order_cap) {
  if (gamma.rows() != g->dim() || gamma.cols() != g->dim())
    throw group_error("gamma size does not match the group");
  i64 L = lcm_i64(g->conductor(), gamma.conductor());
  CycMatrix ge = gamma.embedded(L);
  CycMatrix gi = ge.inverse();
  GroupPtr grp = embedded_shared(g, L);
  for (i64 s : grp->generator_indices()) {
    CycMatrix conj = ge * grp->element(s) * gi;
    if (!grp->contains(conj)) throw group_error("gamma does not normalize the group");
  }
  return ReflectionCoset(grp, ge, order_cap);
}

ReflectionCoset untwisted_coset(GroupPtr g) {
  return ReflectionCoset(g, CycMatrix::identity(g->dim(), g->conductor()));
}

}  // namespace refl
