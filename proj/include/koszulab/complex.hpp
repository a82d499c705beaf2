#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "koszulab/module.hpp"

namespace koszulab {

/// Bounded cohomological complex C^lo -> ... -> C^hi of presented modules (free
/// covers with optional relation matrices), differentials d^n : C^n -> C^{n+1}.
///
/// Each basis element carries a key; tensor products order their bases by the
/// lexicographic order of concatenated keys, so (A (x) B) (x) C and A (x) (B (x) C)
/// coincide exactly.
template <FieldElement K>
class FreeComplex {
 public:
  using Key = std::vector<int>;

  FreeComplex() = default;

  FreeComplex(Ring<K> ring, int lo, std::vector<FpModule<K>> terms, std::vector<Matrix<K>> diffs,
              std::vector<std::vector<Key>> keys = {}, bool verify = true)
      : ring_(std::move(ring)), lo_(lo), terms_(std::move(terms)), diffs_(std::move(diffs)), keys_(std::move(keys)) {
    const std::size_t n = terms_.size();
    if (n == 0 ? !diffs_.empty() : diffs_.size() != n - 1) throw InvalidArgument("differential count mismatch");
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (diffs_[i].cols() != terms_[i].rank() || diffs_[i].rows() != terms_[i + 1].rank()) {
        throw InvalidArgument("differential shape mismatch at degree " + std::to_string(lo_ + static_cast<int>(i)));
      }
      for (std::size_t r = 0; r < diffs_[i].rows(); ++r) diffs_[i].set_row_degree(r, terms_[i + 1].degrees()[r]);
      for (std::size_t c = 0; c < diffs_[i].cols(); ++c) diffs_[i].set_col_degree(c, terms_[i].degrees()[c]);
    }
    if (keys_.empty()) assign_fresh_keys();
    if (keys_.size() != n) throw InvalidArgument("key count mismatch");
    if (verify && !is_complex()) throw InvalidArgument("d o d != 0 or differential does not respect relations");
  }

  /// The module M placed in cohomological degree n.
  static FreeComplex concentrated(const FpModule<K>& m, int n) { return FreeComplex(m.ring(), n, {m}, {}, {}, false); }

  const Ring<K>& ring() const noexcept { return ring_; }
  int lo() const noexcept { return lo_; }
  int hi() const noexcept { return lo_ + static_cast<int>(terms_.size()) - 1; }
  bool in_support(int n) const noexcept { return n >= lo_ && n <= hi(); }

  FpModule<K> term(int n) const {
    if (!in_support(n)) return FpModule<K>::free(ring_, {});
    return terms_[static_cast<std::size_t>(n - lo_)];
  }
  std::size_t rank(int n) const { return in_support(n) ? terms_[static_cast<std::size_t>(n - lo_)].rank() : 0; }
  std::vector<Degree> degrees(int n) const { return in_support(n) ? term(n).degrees() : std::vector<Degree>{}; }

  /// d^n : C^n -> C^{n+1} (zero matrix outside the support).
  Matrix<K> differential(int n) const {
    if (in_support(n) && in_support(n + 1)) return diffs_[static_cast<std::size_t>(n - lo_)];
    return Matrix<K>(ring_, degrees(n + 1), degrees(n));
  }

  const std::vector<Key>& keys(int n) const {
    static const std::vector<Key> empty;
    return in_support(n) ? keys_[static_cast<std::size_t>(n - lo_)] : empty;
  }

  bool is_free() const {
    if (ring_.has_quotient()) return false;
    for (const auto& t : terms_) {
      if (t.relations().cols() != 0) return false;
    }
    return true;
  }

  bool has_relations() const {
    for (const auto& t : terms_) {
      if (t.relations().cols() != 0) return true;
    }
    return false;
  }

  bool is_graded() const {
    if (!ring_.is_graded()) return false;
    for (const auto& t : terms_) {
      if (!t.relations().is_graded()) return false;
    }
    for (const auto& d : diffs_) {
      if (!d.is_graded()) return false;
    }
    return true;
  }

  /// d^{n+1} d^n = 0 and each d^n carries relations into relations, modulo J and relations.
  bool is_complex() const {
    for (int n = lo_; n < hi(); ++n) {
      const Matrix<K> dn = differential(n);
      const FpModule<K> next = term(n + 1);
      const Matrix<K> carried = dn * term(n).relations();
      if (!columns_vanish(carried, next)) return false;
      if (n + 1 < hi()) {
        if (!columns_vanish(differential(n + 1) * dn, term(n + 2))) return false;
      }
    }
    return true;
  }

  friend bool operator==(const FreeComplex& a, const FreeComplex& b) {
    if (a.lo_ != b.lo_ || a.terms_.size() != b.terms_.size() || !a.ring_.same_as(b.ring_)) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (!(a.terms_[i].relations() == b.terms_[i].relations())) return false;
    }
    for (std::size_t i = 0; i < a.diffs_.size(); ++i) {
      if (!(a.diffs_[i] == b.diffs_[i])) return false;
    }
    return true;
  }

  std::string to_string() const {
    std::string out;
    for (int n = lo_; n <= hi(); ++n) {
      out += "C^" + std::to_string(n) + " rank " + std::to_string(rank(n)) + " degrees [";
      const auto ds = degrees(n);
      for (std::size_t i = 0; i < ds.size(); ++i) out += (i ? ", " : "") + std::to_string(ds[i]);
      out += "]";
      if (term(n).relations().cols() != 0) out += " relations " + term(n).relations().to_string();
      out += "\n";
      if (n < hi()) out += "d^" + std::to_string(n) + " = " + differential(n).to_string() + "\n";
    }
    return out;
  }

 private:
  static bool columns_vanish(const Matrix<K>& m, const FpModule<K>& target) {
    if (m.is_zero()) return true;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!target.is_zero_element(m.column(j))) return false;
    }
    return true;
  }

  void assign_fresh_keys() {
    keys_.assign(terms_.size(), {});
    int pos = 0;
    for (std::size_t i = terms_.size(); i-- > 0;) {
      for (std::size_t k = 0; k < terms_[i].rank(); ++k) keys_[i].push_back({pos++});
    }
  }

  Ring<K> ring_;
  int lo_ = 0;
  std::vector<FpModule<K>> terms_;
  std::vector<Matrix<K>> diffs_;
  std::vector<std::vector<Key>> keys_;
};

/// Degree-0 chain map: component n is a matrix C^n -> D^n.
template <FieldElement K>
class ComplexMap {
 public:
  ComplexMap() = default;

  ComplexMap(FreeComplex<K> source, FreeComplex<K> target, std::map<int, Matrix<K>> components, bool verify = true)
      : source_(std::move(source)), target_(std::move(target)) {
    const int lo = std::min(source_.lo(), target_.lo());
    const int hi = std::max(source_.hi(), target_.hi());
    for (int n = lo; n <= hi; ++n) {
      auto it = components.find(n);
      Matrix<K> m(source_.ring(), target_.degrees(n), source_.degrees(n));
      if (it != components.end()) {
        if (it->second.rows() != m.rows() || it->second.cols() != m.cols()) {
          throw InvalidArgument("chain map component shape mismatch at degree " + std::to_string(n));
        }
        for (std::size_t i = 0; i < m.rows(); ++i) {
          for (std::size_t j = 0; j < m.cols(); ++j) m.set(i, j, it->second.at(i, j));
        }
      }
      components_[n] = std::move(m);
    }
    if (verify && !is_chain_map()) throw InvalidArgument("components do not commute with the differentials");
  }

  static ComplexMap identity(const FreeComplex<K>& c) {
    std::map<int, Matrix<K>> comps;
    for (int n = c.lo(); n <= c.hi(); ++n) comps[n] = Matrix<K>::identity(c.ring(), c.degrees(n));
    return ComplexMap(c, c, std::move(comps), false);
  }

  static ComplexMap zero(const FreeComplex<K>& s, const FreeComplex<K>& t) { return ComplexMap(s, t, {}, false); }

  const FreeComplex<K>& source() const noexcept { return source_; }
  const FreeComplex<K>& target() const noexcept { return target_; }

  Matrix<K> component(int n) const {
    auto it = components_.find(n);
    if (it != components_.end()) return it->second;
    return Matrix<K>(source_.ring(), target_.degrees(n), source_.degrees(n));
  }

  bool is_chain_map() const {
    const int lo = std::min(source_.lo(), target_.lo()) - 1;
    const int hi = std::max(source_.hi(), target_.hi());
    for (int n = lo; n <= hi; ++n) {
      const Matrix<K> lhs = target_.differential(n) * component(n);
      const Matrix<K> rhs = component(n + 1) * source_.differential(n);
      const Matrix<K> diff = lhs - rhs;
      const FpModule<K> tgt = target_.term(n + 1);
      for (std::size_t j = 0; j < diff.cols(); ++j) {
        if (!tgt.is_zero_element(diff.column(j))) return false;
      }
      const Matrix<K> carried = component(n) * source_.term(n).relations();
      const FpModule<K> tn = target_.term(n);
      for (std::size_t j = 0; j < carried.cols(); ++j) {
        if (!tn.is_zero_element(carried.column(j))) return false;
      }
    }
    return true;
  }

  /// this after `first`.
  ComplexMap after(const ComplexMap& first) const {
    std::map<int, Matrix<K>> comps;
    for (int n = first.source_.lo(); n <= first.source_.hi(); ++n) comps[n] = component(n) * first.component(n);
    return ComplexMap(first.source_, target_, std::move(comps), false);
  }

  /// Exact entrywise equality of all components.
  friend bool operator==(const ComplexMap& a, const ComplexMap& b) {
    const int lo = std::min(a.source_.lo(), b.source_.lo());
    const int hi = std::max(a.source_.hi(), b.source_.hi());
    for (int n = lo; n <= hi; ++n) {
      const Matrix<K> x = a.component(n), y = b.component(n);
      if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
      for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
          if (!(x.at(i, j) == y.at(i, j))) return false;
        }
      }
    }
    return true;
  }

  /// Inverse chain map when every component is an invertible matrix over the ring.
  std::optional<ComplexMap> inverse() const {
    const Ring<K>& ring = source_.ring();
    std::map<int, Matrix<K>> comps;
    const int lo = std::min(source_.lo(), target_.lo());
    const int hi = std::max(source_.hi(), target_.hi());
    for (int n = lo; n <= hi; ++n) {
      const Matrix<K> f = component(n);
      if (f.rows() != f.cols()) return std::nullopt;
      Matrix<K> g(ring, source_.degrees(n), target_.degrees(n));
      TrackedBasis<K> solver(f, Matrix<K>(ring, f.row_degrees(), {}));
      for (std::size_t j = 0; j < f.rows(); ++j) {
        std::vector<Poly<K>> e(f.rows(), ring.zero());
        e[j] = ring.one();
        auto sol = solver.lift(e);
        if (!sol) return std::nullopt;
        for (std::size_t i = 0; i < sol->size(); ++i) g.set(i, j, (*sol)[i]);
      }
      const Matrix<K> back = g * f;
      for (std::size_t i = 0; i < back.rows(); ++i) {
        for (std::size_t j = 0; j < back.cols(); ++j) {
          const Poly<K> want = i == j ? ring.one() : ring.zero();
          if (!(back.at(i, j) - want).is_zero()) return std::nullopt;
        }
      }
      comps[n] = g;
    }
    return ComplexMap(target_, source_, std::move(comps), false);
  }

 private:
  FreeComplex<K> source_, target_;
  std::map<int, Matrix<K>> components_;
};

// ---------------------------------------------------------------------------
// Tensor products.

/// Basis element of (C (x) D)^n: c_i in C^p tensor d_j in D^q.
struct TensorIndex {
  int p;
  std::size_t i;
  int q;
  std::size_t j;
  auto operator<=>(const TensorIndex&) const = default;
};

template <FieldElement K>
std::vector<TensorIndex> tensor_basis(const FreeComplex<K>& c, const FreeComplex<K>& d, int n) {
  std::vector<std::pair<typename FreeComplex<K>::Key, TensorIndex>> items;
  for (int p = c.lo(); p <= c.hi(); ++p) {
    const int q = n - p;
    if (!d.in_support(q)) continue;
    for (std::size_t i = 0; i < c.rank(p); ++i) {
      for (std::size_t j = 0; j < d.rank(q); ++j) {
        auto key = c.keys(p)[i];
        key.insert(key.end(), d.keys(q)[j].begin(), d.keys(q)[j].end());
        items.push_back({std::move(key), TensorIndex{p, i, q, j}});
      }
    }
  }
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });
  std::vector<TensorIndex> out;
  for (auto& it : items) out.push_back(it.second);
  return out;
}

/// Total tensor complex, d(a (x) b) = da (x) b + (-1)^{|a|} a (x) db; generator degrees add.
template <FieldElement K>
FreeComplex<K> tensor(const FreeComplex<K>& c, const FreeComplex<K>& d) {
  require_same_ring(c.ring(), d.ring(), "tensor of complexes over different rings");
  const Ring<K>& ring = c.ring();
  const int lo = c.lo() + d.lo();
  const int hi = c.hi() + d.hi();
  if (c.hi() < c.lo() || d.hi() < d.lo()) return FreeComplex<K>(ring, 0, {}, {});
  std::vector<std::vector<TensorIndex>> bases;
  std::vector<std::map<TensorIndex, std::size_t>> pos;
  std::vector<FpModule<K>> terms;
  std::vector<std::vector<typename FreeComplex<K>::Key>> keys;
  for (int n = lo; n <= hi; ++n) {
    auto b = tensor_basis(c, d, n);
    std::map<TensorIndex, std::size_t> idx;
    std::vector<Degree> degs;
    std::vector<typename FreeComplex<K>::Key> ks;
    for (std::size_t k = 0; k < b.size(); ++k) {
      idx[b[k]] = k;
      degs.push_back(c.degrees(b[k].p)[b[k].i] + d.degrees(b[k].q)[b[k].j]);
      auto key = c.keys(b[k].p)[b[k].i];
      key.insert(key.end(), d.keys(b[k].q)[b[k].j].begin(), d.keys(b[k].q)[b[k].j].end());
      ks.push_back(std::move(key));
    }
    // Relations: c_i (x) rho for rho a relation of D^q, and sigma (x) d_j for sigma a relation of C^p.
    Matrix<K> rel(ring, degs, {});
    for (int p = c.lo(); p <= c.hi(); ++p) {
      const int q = n - p;
      if (!d.in_support(q)) continue;
      const Matrix<K> rd = d.term(q).relations();
      for (std::size_t i = 0; i < c.rank(p); ++i) {
        for (std::size_t r = 0; r < rd.cols(); ++r) {
          std::vector<Poly<K>> col(b.size(), ring.zero());
          for (std::size_t l = 0; l < rd.rows(); ++l) col[idx.at({p, i, q, l})] = rd.at(l, r);
          rel.append_column(col, c.degrees(p)[i] + rd.col_degrees()[r]);
        }
      }
      const Matrix<K> rc = c.term(p).relations();
      for (std::size_t r = 0; r < rc.cols(); ++r) {
        for (std::size_t j = 0; j < d.rank(q); ++j) {
          std::vector<Poly<K>> col(b.size(), ring.zero());
          for (std::size_t l = 0; l < rc.rows(); ++l) col[idx.at({p, l, q, j})] = rc.at(l, r);
          rel.append_column(col, rc.col_degrees()[r] + d.degrees(q)[j]);
        }
      }
    }
    terms.emplace_back(std::move(rel));
    bases.push_back(std::move(b));
    pos.push_back(std::move(idx));
    keys.push_back(std::move(ks));
  }
  std::vector<Matrix<K>> diffs;
  for (int n = lo; n < hi; ++n) {
    const auto& src = bases[static_cast<std::size_t>(n - lo)];
    const auto& tpos = pos[static_cast<std::size_t>(n + 1 - lo)];
    Matrix<K> m(ring, terms[static_cast<std::size_t>(n + 1 - lo)].degrees(), terms[static_cast<std::size_t>(n - lo)].degrees());
    for (std::size_t col = 0; col < src.size(); ++col) {
      const auto [p, i, q, j] = src[col];
      if (c.in_support(p + 1)) {
        const Matrix<K> dc = c.differential(p);
        for (std::size_t k = 0; k < dc.rows(); ++k) {
          if (dc.at(k, i).is_zero()) continue;
          const std::size_t row = tpos.at({p + 1, k, q, j});
          m.set(row, col, m.at(row, col) + dc.at(k, i));
        }
      }
      if (d.in_support(q + 1)) {
        const Matrix<K> dd = d.differential(q);
        const bool neg = (p % 2) != 0;
        for (std::size_t l = 0; l < dd.rows(); ++l) {
          if (dd.at(l, j).is_zero()) continue;
          const std::size_t row = tpos.at({p, i, q + 1, l});
          m.set(row, col, neg ? m.at(row, col) - dd.at(l, j) : m.at(row, col) + dd.at(l, j));
        }
      }
    }
    diffs.push_back(std::move(m));
  }
  return FreeComplex<K>(ring, lo, std::move(terms), std::move(diffs), std::move(keys), false);
}

/// f (x) g : C (x) D -> C' (x) D' for degree-0 chain maps.
template <FieldElement K>
ComplexMap<K> tensor_maps(const ComplexMap<K>& f, const ComplexMap<K>& g, const FreeComplex<K>& src,
                          const FreeComplex<K>& tgt) {
  const auto& c = f.source();
  const auto& d = g.source();
  const auto& c2 = f.target();
  const auto& d2 = g.target();
  std::map<int, Matrix<K>> comps;
  for (int n = src.lo(); n <= src.hi(); ++n) {
    const auto sb = tensor_basis(c, d, n);
    const auto tb = tensor_basis(c2, d2, n);
    std::map<TensorIndex, std::size_t> tpos;
    for (std::size_t k = 0; k < tb.size(); ++k) tpos[tb[k]] = k;
    Matrix<K> m(src.ring(), tgt.degrees(n), src.degrees(n));
    for (std::size_t col = 0; col < sb.size(); ++col) {
      const auto [p, i, q, j] = sb[col];
      const Matrix<K> fp = f.component(p);
      const Matrix<K> gq = g.component(q);
      for (std::size_t a = 0; a < fp.rows(); ++a) {
        if (fp.at(a, i).is_zero()) continue;
        for (std::size_t b = 0; b < gq.rows(); ++b) {
          if (gq.at(b, j).is_zero()) continue;
          const std::size_t row = tpos.at({p, a, q, b});
          m.set(row, col, m.at(row, col) + fp.at(a, i) * gq.at(b, j));
        }
      }
    }
    comps[n] = std::move(m);
  }
  return ComplexMap<K>(src, tgt, std::move(comps), false);
}

// ---------------------------------------------------------------------------
// Hom complexes.

/// Basis element of Hom^n(C, D): the map sending c_i in C^p to d_k in D^{p+n}.
struct HomIndex {
  int p;
  std::size_t i;
  std::size_t k;
  auto operator<=>(const HomIndex&) const = default;
};

template <FieldElement K>
std::vector<HomIndex> hom_basis(const FreeComplex<K>& c, const FreeComplex<K>& d, int n) {
  std::vector<HomIndex> out;
  for (int p = c.lo(); p <= c.hi(); ++p) {
    if (!d.in_support(p + n)) continue;
    for (std::size_t i = 0; i < c.rank(p); ++i) {
      for (std::size_t k = 0; k < d.rank(p + n); ++k) out.push_back({p, i, k});
    }
  }
  return out;
}

/// Hom^n = prod_p Hom(C^p, D^{p+n}), (df) = d_D f - (-1)^n f d_C. C must be free.
template <FieldElement K>
FreeComplex<K> hom(const FreeComplex<K>& c, const FreeComplex<K>& d) {
  require_same_ring(c.ring(), d.ring(), "hom of complexes over different rings");
  for (int p = c.lo(); p <= c.hi(); ++p) {
    if (c.term(p).relations().cols() != 0) throw InvalidArgument("hom source must be a complex of free modules");
  }
  const Ring<K>& ring = c.ring();
  if (c.hi() < c.lo() || d.hi() < d.lo()) return FreeComplex<K>(ring, 0, {}, {});
  const int lo = d.lo() - c.hi();
  const int hi = d.hi() - c.lo();
  std::vector<std::vector<HomIndex>> bases;
  std::vector<std::map<HomIndex, std::size_t>> pos;
  std::vector<FpModule<K>> terms;
  for (int n = lo; n <= hi; ++n) {
    auto b = hom_basis(c, d, n);
    std::map<HomIndex, std::size_t> idx;
    std::vector<Degree> degs;
    for (std::size_t k = 0; k < b.size(); ++k) {
      idx[b[k]] = k;
      degs.push_back(d.degrees(b[k].p + n)[b[k].k] - c.degrees(b[k].p)[b[k].i]);
    }
    Matrix<K> rel(ring, degs, {});
    for (int p = c.lo(); p <= c.hi(); ++p) {
      if (!d.in_support(p + n)) continue;
      const Matrix<K> rd = d.term(p + n).relations();
      for (std::size_t i = 0; i < c.rank(p); ++i) {
        for (std::size_t r = 0; r < rd.cols(); ++r) {
          std::vector<Poly<K>> col(b.size(), ring.zero());
          for (std::size_t l = 0; l < rd.rows(); ++l) col[idx.at({p, i, l})] = rd.at(l, r);
          rel.append_column(col, rd.col_degrees()[r] - c.degrees(p)[i]);
        }
      }
    }
    terms.emplace_back(std::move(rel));
    bases.push_back(std::move(b));
    pos.push_back(std::move(idx));
  }
  std::vector<Matrix<K>> diffs;
  for (int n = lo; n < hi; ++n) {
    const auto& src = bases[static_cast<std::size_t>(n - lo)];
    const auto& tpos = pos[static_cast<std::size_t>(n + 1 - lo)];
    Matrix<K> m(ring, terms[static_cast<std::size_t>(n + 1 - lo)].degrees(), terms[static_cast<std::size_t>(n - lo)].degrees());
    const bool neg_pre = (n % 2) == 0;  // -(-1)^n
    for (std::size_t col = 0; col < src.size(); ++col) {
      const auto [p, i, k] = src[col];
      if (d.in_support(p + n + 1)) {
        const Matrix<K> dd = d.differential(p + n);
        for (std::size_t l = 0; l < dd.rows(); ++l) {
          if (dd.at(l, k).is_zero()) continue;
          const std::size_t row = tpos.at({p, i, l});
          m.set(row, col, m.at(row, col) + dd.at(l, k));
        }
      }
      if (c.in_support(p - 1)) {
        const Matrix<K> dc = c.differential(p - 1);
        for (std::size_t j = 0; j < dc.cols(); ++j) {
          if (dc.at(i, j).is_zero()) continue;
          const std::size_t row = tpos.at({p - 1, j, k});
          m.set(row, col, neg_pre ? m.at(row, col) - dc.at(i, j) : m.at(row, col) + dc.at(i, j));
        }
      }
    }
    diffs.push_back(std::move(m));
  }
  return FreeComplex<K>(ring, lo, std::move(terms), std::move(diffs), {}, false);
}

/// Hom(f, D) : Hom(C', D) -> Hom(C, D), phi |-> phi o f.
template <FieldElement K>
ComplexMap<K> hom_precompose(const ComplexMap<K>& f, const FreeComplex<K>& d, const FreeComplex<K>& src,
                             const FreeComplex<K>& tgt) {
  const auto& c = f.source();
  const auto& c2 = f.target();
  std::map<int, Matrix<K>> comps;
  for (int n = tgt.lo(); n <= tgt.hi(); ++n) {
    const auto sb = hom_basis(c2, d, n);
    const auto tb = hom_basis(c, d, n);
    std::map<HomIndex, std::size_t> tpos;
    for (std::size_t k = 0; k < tb.size(); ++k) tpos[tb[k]] = k;
    Matrix<K> m(tgt.ring(), tgt.degrees(n), src.degrees(n));
    for (std::size_t col = 0; col < sb.size(); ++col) {
      const auto [p, a, k] = sb[col];
      const Matrix<K> fp = f.component(p);
      for (std::size_t i = 0; i < fp.cols(); ++i) {
        if (fp.at(a, i).is_zero()) continue;
        const std::size_t row = tpos.at({p, i, k});
        m.set(row, col, m.at(row, col) + fp.at(a, i));
      }
    }
    comps[n] = std::move(m);
  }
  return ComplexMap<K>(src, tgt, std::move(comps), false);
}

/// Hom(C, g) : Hom(C, D) -> Hom(C, D'), phi |-> g o phi.
template <FieldElement K>
ComplexMap<K> hom_postcompose(const FreeComplex<K>& c, const ComplexMap<K>& g, const FreeComplex<K>& src,
                              const FreeComplex<K>& tgt) {
  const auto& d = g.source();
  const auto& d2 = g.target();
  std::map<int, Matrix<K>> comps;
  for (int n = src.lo(); n <= src.hi(); ++n) {
    const auto sb = hom_basis(c, d, n);
    const auto tb = hom_basis(c, d2, n);
    std::map<HomIndex, std::size_t> tpos;
    for (std::size_t k = 0; k < tb.size(); ++k) tpos[tb[k]] = k;
    Matrix<K> m(src.ring(), tgt.degrees(n), src.degrees(n));
    for (std::size_t col = 0; col < sb.size(); ++col) {
      const auto [p, i, k] = sb[col];
      const Matrix<K> gq = g.component(p + n);
      for (std::size_t l = 0; l < gq.rows(); ++l) {
        if (gq.at(l, k).is_zero()) continue;
        const std::size_t row = tpos.at({p, i, l});
        m.set(row, col, m.at(row, col) + gq.at(l, k));
      }
    }
    comps[n] = std::move(m);
  }
  return ComplexMap<K>(src, tgt, std::move(comps), false);
}

// ---------------------------------------------------------------------------
// Shift, twist, cone.

/// C[k]: (C[k])^n = C^{n+k}, differential (-1)^k d.
template <FieldElement K>
FreeComplex<K> shift(const FreeComplex<K>& c, int k) {
  std::vector<FpModule<K>> terms;
  std::vector<Matrix<K>> diffs;
  std::vector<std::vector<typename FreeComplex<K>::Key>> keys;
  for (int n = c.lo(); n <= c.hi(); ++n) {
    terms.push_back(c.term(n));
    keys.push_back(c.keys(n));
    if (n < c.hi()) diffs.push_back(k % 2 == 0 ? c.differential(n) : c.differential(n).negated());
  }
  return FreeComplex<K>(c.ring(), c.lo() - k, std::move(terms), std::move(diffs), std::move(keys), false);
}

/// C(-by): every generator degree raised by `by`.
template <FieldElement K>
FreeComplex<K> twist(const FreeComplex<K>& c, Degree by) {
  std::vector<FpModule<K>> terms;
  std::vector<Matrix<K>> diffs;
  std::vector<std::vector<typename FreeComplex<K>::Key>> keys;
  for (int n = c.lo(); n <= c.hi(); ++n) {
    terms.push_back(c.term(n).shifted(by));
    keys.push_back(c.keys(n));
    if (n < c.hi()) diffs.push_back(c.differential(n));
  }
  return FreeComplex<K>(c.ring(), c.lo(), std::move(terms), std::move(diffs), std::move(keys), false);
}

/// cone(f)^n = C^{n+1} + D^n, d(c, x) = (-d_C c, f(c) + d_D x).
template <FieldElement K>
FreeComplex<K> cone(const ComplexMap<K>& f) {
  const auto& c = f.source();
  const auto& d = f.target();
  const Ring<K>& ring = c.ring();
  const int lo = std::min(c.lo() - 1, d.lo());
  const int hi = std::max(c.hi() - 1, d.hi());
  std::vector<FpModule<K>> terms;
  for (int n = lo; n <= hi; ++n) terms.push_back(FpModule<K>::direct_sum(c.term(n + 1), d.term(n)));
  std::vector<Matrix<K>> diffs;
  for (int n = lo; n < hi; ++n) {
    const std::size_t cn = c.rank(n + 1), dn = d.rank(n);
    const std::size_t cn1 = c.rank(n + 2), dn1 = d.rank(n + 1);
    Matrix<K> m(ring, terms[static_cast<std::size_t>(n + 1 - lo)].degrees(), terms[static_cast<std::size_t>(n - lo)].degrees());
    const Matrix<K> dc = c.differential(n + 1);
    const Matrix<K> fc = f.component(n + 1);
    const Matrix<K> dd = d.differential(n);
    for (std::size_t j = 0; j < cn; ++j) {
      for (std::size_t i = 0; i < cn1; ++i) m.set(i, j, -dc.at(i, j));
      for (std::size_t i = 0; i < dn1; ++i) m.set(cn1 + i, j, fc.at(i, j));
    }
    for (std::size_t j = 0; j < dn; ++j) {
      for (std::size_t i = 0; i < dn1; ++i) m.set(cn1 + i, cn + j, dd.at(i, j));
    }
    diffs.push_back(std::move(m));
  }
  return FreeComplex<K>(ring, lo, std::move(terms), std::move(diffs), {}, false);
}

/// Complex R^a -> R^b in degrees (n, n+1) given by a matrix.
template <FieldElement K>
FreeComplex<K> two_term(const Matrix<K>& m, int n) {
  return FreeComplex<K>(m.ring(), n,
                        {FpModule<K>::free(m.ring(), m.col_degrees()), FpModule<K>::free(m.ring(), m.row_degrees())}, {m});
}

// ---------------------------------------------------------------------------
// Homology.

/// H^i(C) = Z / B with Z = ker(d^i) mod the relations of C^{i+1} and B = relations of
/// C^i plus im(d^{i-1}). Generators of the returned module are the columns of `cycles`.
template <FieldElement K>
struct Homology {
  FpModule<K> module;
  Matrix<K> cycles;
  Matrix<K> boundaries;
};

template <FieldElement K>
Homology<K> homology(const FreeComplex<K>& c, int i) {
  const Ring<K>& ring = c.ring();
  if (!c.in_support(i)) {
    Matrix<K> empty(ring, {}, {});
    return {FpModule<K>::free(ring, {}), empty, empty};
  }
  const FpModule<K> ci = c.term(i);
  Matrix<K> z = c.in_support(i + 1) ? TrackedBasis<K>(c.differential(i), c.term(i + 1).relations()).kernel()
                                    : Matrix<K>::identity(ring, ci.degrees());
  Matrix<K> b = ci.relations();
  if (c.in_support(i - 1)) b = Matrix<K>::hcat(b, c.differential(i - 1));
  // Drop cycles that already vanish in C^i.
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < z.cols(); ++j) {
    if (!ci.is_zero_element(z.column(j))) keep.push_back(j);
  }
  z = z.select_columns(keep);
  return {subquotient(z, b), z, b};
}

template <FieldElement K>
ModuleMap<K> induced_homology_map(const ComplexMap<K>& f, int i, const Homology<K>& hs, const Homology<K>& ht) {
  const Ring<K>& ring = f.source().ring();
  Matrix<K> m(ring, ht.module.degrees(), hs.module.degrees());
  if (hs.cycles.cols() == 0 || ht.cycles.cols() == 0) return ModuleMap<K>(hs.module, ht.module, m, false);
  const Matrix<K> images = f.component(i) * hs.cycles;
  TrackedBasis<K> solver(ht.cycles, ht.boundaries);
  for (std::size_t j = 0; j < images.cols(); ++j) {
    auto sol = solver.lift(images.column(j));
    if (!sol) throw LiftFailure("image of a cycle is not a cycle in degree " + std::to_string(i));
    for (std::size_t r = 0; r < sol->size(); ++r) m.set(r, j, (*sol)[r]);
  }
  return ModuleMap<K>(hs.module, ht.module, m, false);
}

/// Map H^i(C) -> H^i(D) induced by f, written on the cycle generators.
template <FieldElement K>
ModuleMap<K> induced_homology_map(const ComplexMap<K>& f, int i) {
  const Homology<K> hs = homology(f.source(), i);
  const Homology<K> ht = homology(f.target(), i);
  return induced_homology_map(f, i, hs, ht);
}

/// dim_k H^i(C)_d for a graded complex.
template <FieldElement K>
std::size_t homology_dimension(const FreeComplex<K>& c, int i, Degree d) {
  return homology(c, i).module.dimension(d);
}

/// Connecting map H^n(C) -> H^{n+1}(A) of a short exact sequence 0 -> A -i-> B -p-> C -> 0:
/// lift a cycle through p, apply d_B, pull back through i.
template <FieldElement K>
ModuleMap<K> connecting_map(const ComplexMap<K>& i, const ComplexMap<K>& p, int n) {
  const Ring<K>& ring = p.source().ring();
  const Homology<K> hc = homology(p.target(), n);
  const Homology<K> ha = homology(i.source(), n + 1);
  Matrix<K> m(ring, ha.module.degrees(), hc.module.degrees());
  if (hc.cycles.cols() == 0) return ModuleMap<K>(hc.module, ha.module, m, false);
  TrackedBasis<K> through_p(p.component(n), p.target().term(n).relations());
  const Matrix<K> inc = Matrix<K>::hcat(i.component(n + 1), i.target().term(n + 1).relations());
  TrackedBasis<K> through_i(inc, Matrix<K>(ring, inc.row_degrees(), {}));
  TrackedBasis<K> in_h(ha.cycles, ha.boundaries);
  const std::size_t na = i.component(n + 1).cols();
  for (std::size_t j = 0; j < hc.cycles.cols(); ++j) {
    auto b = through_p.lift(hc.cycles.column(j));
    if (!b) throw LiftFailure("cycle does not lift through the surjection");
    Matrix<K> bcol(ring, p.source().degrees(n), {});
    bcol.append_column(*b, hc.cycles.col_degrees()[j]);
    const Matrix<K> db = p.source().differential(n) * bcol;
    auto a = through_i.lift(db.column(0));
    if (!a) throw LiftFailure("boundary does not lie in the subcomplex");
    std::vector<Poly<K>> acol(a->begin(), a->begin() + static_cast<std::ptrdiff_t>(na));
    auto h = in_h.lift(acol);
    if (!h) throw LiftFailure("connecting image is not a cycle");
    for (std::size_t r = 0; r < h->size(); ++r) m.set(r, j, (*h)[r]);
  }
  return ModuleMap<K>(hc.module, ha.module, m, false);
}

/// Exactness of the long homology sequence of 0 -> A -> B -> C -> 0 at every spot
/// H^n(A) -> H^n(B) -> H^n(C) -> H^{n+1}(A) for n in [lo, hi].
template <FieldElement K>
bool long_exact_sequence_exact(const ComplexMap<K>& i, const ComplexMap<K>& p, int lo, int hi) {
  for (int n = lo; n <= hi; ++n) {
    const ModuleMap<K> hi_n = induced_homology_map(i, n);
    const ModuleMap<K> hp_n = induced_homology_map(p, n);
    const ModuleMap<K> delta = connecting_map(i, p, n);
    const ModuleMap<K> hi_next = induced_homology_map(i, n + 1);
    const ModuleMap<K> delta_prev = connecting_map(i, p, n - 1);
    if (!is_exact_at(hi_n, hp_n)) return false;
    if (!is_exact_at(hp_n, delta)) return false;
    if (!is_exact_at(delta, hi_next)) return false;
    if (!is_exact_at(delta_prev, hi_n)) return false;
  }
  return true;
}

/// D -> cone(f) and cone(f) -> C[1], the maps of the standard triangle.
template <FieldElement K>
std::pair<ComplexMap<K>, ComplexMap<K>> cone_triangle_maps(const ComplexMap<K>& f) {
  const FreeComplex<K> cn = cone(f);
  const FreeComplex<K> c1 = shift(f.source(), 1);
  const auto& c = f.source();
  const auto& d = f.target();
  const Ring<K>& ring = c.ring();
  std::map<int, Matrix<K>> inc, proj;
  for (int n = cn.lo(); n <= cn.hi(); ++n) {
    const std::size_t cr = c.rank(n + 1), dr = d.rank(n);
    Matrix<K> a(ring, cn.degrees(n), d.degrees(n));
    for (std::size_t k = 0; k < dr; ++k) a.set(cr + k, k, ring.one());
    inc[n] = a;
    Matrix<K> b(ring, c1.degrees(n), cn.degrees(n));
    for (std::size_t k = 0; k < cr; ++k) b.set(k, k, ring.one());
    proj[n] = b;
  }
  return {ComplexMap<K>(d, cn, std::move(inc)), ComplexMap<K>(cn, c1, std::move(proj))};
}

}  // namespace koszulab
