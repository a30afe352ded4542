#include "refl/modulerep.hpp"

#include <sstream>

namespace refl {

namespace {

i64 binom(i64 n, i64 k) {
  if (k < 0 || k > n) return 0;
  i64 r = 1;
  for (i64 i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// all increasing k-subsets of {0..n-1}, lexicographic
std::vector<std::vector<i64>> subsets(i64 n, i64 k) {
  std::vector<std::vector<i64>> out;
  std::vector<i64> cur(k);
  for (i64 i = 0; i < k; ++i) cur[i] = i;
  if (k == 0) {
    out.push_back({});
    return out;
  }
  if (k > n) return out;
  while (true) {
    out.push_back(cur);
    i64 i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (i64 j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

Cyclotomic minor_det(const CycMatrix& m, const std::vector<i64>& rows,
                     const std::vector<i64>& cols) {
  i64 k = static_cast<i64>(rows.size());
  CycMatrix sub(k, k, m.conductor());
  for (i64 i = 0; i < k; ++i)
    for (i64 j = 0; j < k; ++j) sub.set(i, j, m.at(rows[i], cols[j]));
  return det(sub);
}

}  // namespace

ModuleRep ModuleRep::defining() { return ModuleRep(Kind::V); }
ModuleRep ModuleRep::trivial() { return ModuleRep(Kind::Trivial); }

ModuleRep ModuleRep::dual(const ModuleRep& m) {
  ModuleRep r(Kind::Dual);
  r.a_ = std::make_shared<ModuleRep>(m);
  return r;
}

ModuleRep ModuleRep::galois(const ModuleRep& m, i64 k) {
  ModuleRep r(Kind::Galois);
  r.a_ = std::make_shared<ModuleRep>(m);
  r.param_ = k;
  return r;
}

ModuleRep ModuleRep::exterior(const ModuleRep& m, i64 p) {
  ModuleRep r(Kind::Exterior);
  r.a_ = std::make_shared<ModuleRep>(m);
  r.param_ = p;
  return r;
}

ModuleRep ModuleRep::tensor(const ModuleRep& a, const ModuleRep& b) {
  ModuleRep r(Kind::Tensor);
  r.a_ = std::make_shared<ModuleRep>(a);
  r.b_ = std::make_shared<ModuleRep>(b);
  return r;
}

ModuleRep ModuleRep::explicit_table(std::map<std::string, CycMatrix> table, i64 dim) {
  ModuleRep r(Kind::Table);
  r.table_ = std::make_shared<const std::map<std::string, CycMatrix>>(std::move(table));
  r.table_dim_ = dim;
  return r;
}

i64 ModuleRep::dim(i64 r) const {
  switch (kind_) {
    case Kind::V: return r;
    case Kind::Trivial: return 1;
    case Kind::Dual: return a_->dim(r);
    case Kind::Galois: return a_->dim(r);
    case Kind::Exterior: return binom(a_->dim(r), param_);
    case Kind::Tensor: return a_->dim(r) * b_->dim(r);
    case Kind::Table: return table_dim_;
  }
  return 0;
}

CycMatrix ModuleRep::act(const CycMatrix& g) const {
  switch (kind_) {
    case Kind::V:
      return g;
    case Kind::Trivial:
      return CycMatrix::identity(1, g.conductor());
    case Kind::Dual:
      return a_->act(g).inverse().transpose();
    case Kind::Galois: {
      CycMatrix m = a_->act(g);
      CycMatrix out(m.rows(), m.cols(), m.conductor());
      for (i64 i = 0; i < m.rows(); ++i)
        for (i64 j = 0; j < m.cols(); ++j) out.set(i, j, galois_apply(param_, m.at(i, j)));
      return out;
    }
    case Kind::Exterior: {
      CycMatrix m = a_->act(g);
      auto idx = subsets(m.rows(), param_);
      i64 n = static_cast<i64>(idx.size());
      CycMatrix out(n, n, m.conductor());
      for (i64 i = 0; i < n; ++i)
        for (i64 j = 0; j < n; ++j) out.set(i, j, minor_det(m, idx[i], idx[j]));
      return out;
    }
    case Kind::Tensor: {
      CycMatrix x = a_->act(g), y = b_->act(g);
      auto [a, b] = aligned(x, y);
      CycMatrix out(a.rows() * b.rows(), a.cols() * b.cols(), a.conductor());
      for (i64 i = 0; i < a.rows(); ++i)
        for (i64 j = 0; j < a.cols(); ++j) {
          if (a.at(i, j).is_zero()) continue;
          for (i64 k = 0; k < b.rows(); ++k)
            for (i64 l = 0; l < b.cols(); ++l) {
              if (b.at(k, l).is_zero()) continue;
              out.set(i * b.rows() + k, j * b.cols() + l, a.at(i, j) * b.at(k, l));
            }
        }
      return out;
    }
    case Kind::Table: {
      auto it = table_->find(g.key());
      if (it == table_->end()) {
        // retry at the table's conductor
        for (const auto& [k, v] : *table_) {
          (void)k;
          auto probe = g.embedded(lcm_i64(g.conductor(), v.conductor()));
          auto it2 = table_->find(probe.key());
          if (it2 != table_->end()) return it2->second;
          break;
        }
        throw linalg_error("element not present in explicit module table");
      }
      return it->second;
    }
  }
  throw linalg_error("bad module kind");
}

Cyclotomic ModuleRep::scalar_action(const Cyclotomic& z, i64 r) const {
  CycMatrix m = act(CycMatrix::scalar(r, z));
  auto s = m.as_scalar();
  if (!s) throw linalg_error("scalar does not act as a scalar on this module");
  return *s;
}

std::string ModuleRep::tag() const {
  switch (kind_) {
    case Kind::V: return "V";
    case Kind::Trivial: return "triv";
    case Kind::Dual: return a_->kind_ == Kind::V ? "Vdual" : "dual(" + a_->tag() + ")";
    case Kind::Galois: {
      std::ostringstream os;
      os << "galois" << param_ << "(" << a_->tag() << ")";
      return os.str();
    }
    case Kind::Exterior: {
      std::ostringstream os;
      os << "ext" << param_ << "(" << a_->tag() << ")";
      return os.str();
    }
    case Kind::Tensor: return "(" + a_->tag() + ")x(" + b_->tag() + ")";
    case Kind::Table: return "table";
  }
  return "?";
}

}  // namespace refl
