#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

#include "koszulab/matrix.hpp"
#include "koszulab/polynomial.hpp"

namespace koszulab {

/// Order on module monomials m*e_c. Components carry a block index (lower block
/// dominates, giving elimination orders) and a degree shift; inside a block terms
/// compare by shifted degree (grevlex rings), then the ring order, then component.
struct ModuleOrder {
  MonomialOrder base = MonomialOrder::GRevLex;
  std::vector<Degree> shifts;
  std::vector<int> blocks;

  static ModuleOrder top(MonomialOrder base, std::vector<Degree> shifts) {
    ModuleOrder o;
    o.base = base;
    o.blocks.assign(shifts.size(), 0);
    o.shifts = std::move(shifts);
    return o;
  }

  std::size_t rank() const noexcept { return shifts.size(); }

  int compare(const Monomial& a, std::uint32_t ca, const Monomial& b, std::uint32_t cb) const noexcept {
    if (blocks[ca] != blocks[cb]) return blocks[ca] < blocks[cb] ? 1 : -1;
    if (base == MonomialOrder::GRevLex) {
      const Degree da = a.degree() + shifts[ca];
      const Degree db = b.degree() + shifts[cb];
      if (da != db) return da > db ? 1 : -1;
    }
    const int c = koszulab::compare(a, b, base);
    if (c != 0) return c;
    if (ca != cb) return ca < cb ? 1 : -1;
    return 0;
  }
};

template <FieldElement K>
struct ModTerm {
  Monomial monomial;
  std::uint32_t comp = 0;
  K coeff;
  friend bool operator==(const ModTerm&, const ModTerm&) = default;
};

/// Element of a free module, terms sorted strictly descending under some ModuleOrder.
template <FieldElement K>
using ModVec = std::vector<ModTerm<K>>;

namespace gb_detail {

inline std::uint32_t support_mask(const Monomial& m) {
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    if (m[i] != 0) mask |= (1U << i);
  }
  return mask;
}

template <FieldElement K>
ModVec<K> sorted(ModVec<K> v, const ModuleOrder& ord) {
  std::sort(v.begin(), v.end(), [&](const ModTerm<K>& a, const ModTerm<K>& b) {
    return ord.compare(a.monomial, a.comp, b.monomial, b.comp) > 0;
  });
  ModVec<K> out;
  out.reserve(v.size());
  for (auto& t : v) {
    if (!out.empty() && out.back().comp == t.comp && out.back().monomial == t.monomial) {
      out.back().coeff += t.coeff;
      if (out.back().coeff.is_zero()) out.pop_back();
    } else if (!t.coeff.is_zero()) {
      out.push_back(std::move(t));
    }
  }
  return out;
}

/// f - c * m * g.
template <FieldElement K>
ModVec<K> sub_multiple(const ModVec<K>& f, const K& c, const Monomial& m, const ModVec<K>& g,
                       const ModuleOrder& ord) {
  ModVec<K> out;
  out.reserve(f.size() + g.size());
  std::size_t i = 0, j = 0;
  std::optional<ModTerm<K>> pending;
  auto next_g = [&](std::size_t idx) {
    return ModTerm<K>{g[idx].monomial * m, g[idx].comp, -(g[idx].coeff * c)};
  };
  ModTerm<K> gt;
  bool have_gt = false;
  while (i < f.size() || j < g.size() || have_gt) {
    if (!have_gt && j < g.size()) {
      gt = next_g(j++);
      have_gt = true;
    }
    int cmp;
    if (i == f.size()) cmp = -1;
    else if (!have_gt) cmp = 1;
    else cmp = ord.compare(f[i].monomial, f[i].comp, gt.monomial, gt.comp);
    if (cmp > 0) {
      out.push_back(f[i++]);
    } else if (cmp < 0) {
      out.push_back(std::move(gt));
      have_gt = false;
    } else {
      K s = f[i].coeff + gt.coeff;
      if (!s.is_zero()) out.push_back({f[i].monomial, f[i].comp, std::move(s)});
      ++i;
      have_gt = false;
    }
  }
  return out;
}

template <FieldElement K>
void make_monic(ModVec<K>& v) {
  if (v.empty() || v.front().coeff.is_one()) return;
  const K inv = v.front().coeff.inverse();
  for (auto& t : v) t.coeff = t.coeff * inv;
}

template <FieldElement K>
Degree sugar_of(const ModVec<K>& v, const ModuleOrder& ord) {
  Degree s = 0;
  bool any = false;
  for (const auto& t : v) {
    const Degree d = t.monomial.degree() + ord.shifts[t.comp];
    s = any ? std::max(s, d) : d;
    any = true;
  }
  return s;
}

}  // namespace gb_detail

/// Reduced Gröbner basis of a submodule of a free module (rank = order.rank()).
/// Buchberger's algorithm: sugar-degree selection with the normal strategy (smallest
/// lcm) breaking ties, Buchberger's chain criterion, and the coprime criterion for ideals.
template <FieldElement K>
class ModuleGB {
 public:
  ModuleGB(const Ring<K>& ring, ModuleOrder order, std::vector<ModVec<K>> generators)
      : ring_(ring), order_(std::move(order)) {
    by_comp_.resize(order_.rank());
    for (auto& g : generators) {
      g = gb_detail::sorted(std::move(g), order_);
      if (!g.empty()) input_.push_back(std::move(g));
    }
    run();
  }

  const ModuleOrder& order() const noexcept { return order_; }
  const Ring<K>& ring() const noexcept { return ring_; }
  /// Reduced basis, monic, sorted ascending by leading term.
  const std::vector<ModVec<K>>& basis() const noexcept { return reduced_; }

  /// Full normal form with respect to the reduced basis.
  ModVec<K> normal_form(ModVec<K> f) const {
    f = gb_detail::sorted(std::move(f), order_);
    return reduce_with(f, reduced_, reduced_index_, true);
  }

  bool contains(ModVec<K> f) const { return normal_form(std::move(f)).empty(); }

  /// True when some basis element has leading term exactly (1, comp): that generator is zero in the quotient.
  bool has_unit_in(std::uint32_t comp) const {
    for (const auto& g : reduced_) {
      if (g.front().comp == comp && g.front().monomial.is_one()) return true;
    }
    return false;
  }

  bool is_whole_module() const {
    for (std::uint32_t c = 0; c < order_.rank(); ++c) {
      if (!has_unit_in(c)) return false;
    }
    return true;
  }

 private:
  struct Elem {
    ModVec<K> vec;
    Degree sugar = 0;
    std::uint32_t mask = 0;
    bool active = true;
  };

  struct Pair {
    Degree sugar;
    Monomial lcm;
    std::uint32_t comp;
    std::size_t i, j;
  };

  struct PairLess {
    const ModuleOrder* ord;
    bool operator()(const Pair& a, const Pair& b) const {
      if (a.sugar != b.sugar) return a.sugar < b.sugar;
      const int c = ord->compare(a.lcm, a.comp, b.lcm, b.comp);
      if (c != 0) return c < 0;
      return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    }
  };

  using Index = std::vector<std::vector<std::size_t>>;

  static const ModVec<K>* find_reducer(const Monomial& m, std::uint32_t comp, const std::vector<ModVec<K>>& basis,
                                       const Index& index) {
    const std::uint32_t mask = gb_detail::support_mask(m);
    for (std::size_t idx : index[comp]) {
      const Monomial& lm = basis[idx].front().monomial;
      if ((gb_detail::support_mask(lm) & ~mask) != 0) continue;
      if (lm.divides(m)) return &basis[idx];
    }
    return nullptr;
  }

  ModVec<K> reduce_with(ModVec<K> f, const std::vector<ModVec<K>>& basis, const Index& index, bool full) const {
    ModVec<K> done;
    while (!f.empty()) {
      const auto& lt = f.front();
      const ModVec<K>* g = find_reducer(lt.monomial, lt.comp, basis, index);
      if (g != nullptr) {
        const K c = lt.coeff / g->front().coeff;
        const Monomial m = quotient(lt.monomial, g->front().monomial);
        f = gb_detail::sub_multiple(f, c, m, *g, order_);
      } else if (full) {
        done.push_back(f.front());
        f.erase(f.begin());
      } else {
        break;
      }
    }
    if (!full) return f;
    return done;
  }

  // Top-reduction during Buchberger, tracking sugar.
  std::pair<ModVec<K>, Degree> top_reduce(ModVec<K> f, Degree sugar) const {
    while (!f.empty()) {
      const auto& lt = f.front();
      const std::uint32_t mask = gb_detail::support_mask(lt.monomial);
      const Elem* red = nullptr;
      for (std::size_t idx : by_comp_[lt.comp]) {
        const Elem& e = elems_[idx];
        if ((e.mask & ~mask) != 0) continue;
        if (e.vec.front().monomial.divides(lt.monomial)) {
          red = &e;
          break;
        }
      }
      if (red == nullptr) break;
      const K c = lt.coeff / red->vec.front().coeff;
      const Monomial m = quotient(lt.monomial, red->vec.front().monomial);
      sugar = std::max(sugar, red->sugar + m.degree());
      f = gb_detail::sub_multiple(f, c, m, red->vec, order_);
    }
    return {std::move(f), sugar};
  }

  void add_element(ModVec<K> v, Degree sugar) {
    gb_detail::make_monic(v);
    const std::size_t k = elems_.size();
    const std::uint32_t comp = v.front().comp;
    const Monomial lm = v.front().monomial;
    elems_.push_back({std::move(v), sugar, gb_detail::support_mask(lm), true});
    const bool ideal_case = order_.rank() == 1;
    for (std::size_t i : by_comp_[comp]) {
      const Elem& e = elems_[i];
      const Monomial& lmi = e.vec.front().monomial;
      if (ideal_case && coprime(lmi, lm)) continue;
      Monomial l = lcm(lmi, lm, ring_.weights());
      const Degree s = std::max(e.sugar + quotient(l, lmi).degree(), sugar + quotient(l, lm).degree());
      pairs_.insert({s, l, comp, i, k});
      pending_.insert(key(i, k));
    }
    by_comp_[comp].push_back(k);
  }

  static std::uint64_t key(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return (static_cast<std::uint64_t>(i) << 32U) | j;
  }

  bool chain_criterion(const Pair& p) const {
    for (std::size_t k : by_comp_[p.comp]) {
      if (k == p.i || k == p.j) continue;
      if (!elems_[k].vec.front().monomial.divides(p.lcm)) continue;
      if (pending_.count(key(p.i, k)) || pending_.count(key(p.j, k))) continue;
      return true;
    }
    return false;
  }

  ModVec<K> s_vector(const Pair& p) const {
    const ModVec<K>& f = elems_[p.i].vec;
    const ModVec<K>& g = elems_[p.j].vec;
    ModVec<K> a;
    a.reserve(f.size());
    const Monomial mf = quotient(p.lcm, f.front().monomial);
    for (const auto& t : f) a.push_back({t.monomial * mf, t.comp, t.coeff});
    const Monomial mg = quotient(p.lcm, g.front().monomial);
    return gb_detail::sub_multiple(a, K::one(ring_.field()), mg, g, order_);
  }

  void run() {
    pairs_ = std::set<Pair, PairLess>(PairLess{&order_});
    std::sort(input_.begin(), input_.end(), [&](const ModVec<K>& a, const ModVec<K>& b) {
      const Degree sa = gb_detail::sugar_of(a, order_), sb = gb_detail::sugar_of(b, order_);
      if (sa != sb) return sa < sb;
      return order_.compare(a.front().monomial, a.front().comp, b.front().monomial, b.front().comp) < 0;
    });
    for (auto& g : input_) {
      auto [r, s] = top_reduce(std::move(g), gb_detail::sugar_of(g, order_));
      if (!r.empty()) add_element(std::move(r), std::max(s, gb_detail::sugar_of(r, order_)));
    }
    while (!pairs_.empty()) {
      Pair p = *pairs_.begin();
      pairs_.erase(pairs_.begin());
      pending_.erase(key(p.i, p.j));
      if (chain_criterion(p)) continue;
      auto [r, s] = top_reduce(s_vector(p), p.sugar);
      if (!r.empty()) add_element(std::move(r), s);
    }
    finalize();
  }

  void finalize() {
    // Minimal basis: drop elements whose leading term is divisible by another's.
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      const auto& lti = elems_[i].vec.front();
      bool redundant = false;
      for (std::size_t j = 0; j < elems_.size() && !redundant; ++j) {
        if (i == j) continue;
        const auto& ltj = elems_[j].vec.front();
        if (ltj.comp != lti.comp || !ltj.monomial.divides(lti.monomial)) continue;
        if (!(ltj.monomial == lti.monomial) || j < i) redundant = true;
      }
      if (!redundant) keep.push_back(i);
    }
    std::vector<ModVec<K>> minimal;
    for (auto i : keep) minimal.push_back(elems_[i].vec);
    std::sort(minimal.begin(), minimal.end(), [&](const ModVec<K>& a, const ModVec<K>& b) {
      return order_.compare(a.front().monomial, a.front().comp, b.front().monomial, b.front().comp) < 0;
    });
    // Tail-reduce each element by the others (leading terms are pairwise non-divisible).
    Index index(order_.rank());
    for (std::size_t i = 0; i < minimal.size(); ++i) index[minimal[i].front().comp].push_back(i);
    reduced_.clear();
    for (std::size_t i = 0; i < minimal.size(); ++i) {
      ModVec<K> tail(minimal[i].begin() + 1, minimal[i].end());
      ModVec<K> r = reduce_with(std::move(tail), minimal, index, true);
      ModVec<K> v;
      v.reserve(r.size() + 1);
      v.push_back(minimal[i].front());
      v.insert(v.end(), r.begin(), r.end());
      gb_detail::make_monic(v);
      reduced_.push_back(std::move(v));
    }
    reduced_index_.assign(order_.rank(), {});
    for (std::size_t i = 0; i < reduced_.size(); ++i) reduced_index_[reduced_[i].front().comp].push_back(i);
    elems_.clear();
    by_comp_.clear();
    input_.clear();
  }

  Ring<K> ring_;
  ModuleOrder order_;
  std::vector<ModVec<K>> input_;
  std::vector<Elem> elems_;
  std::vector<std::vector<std::size_t>> by_comp_;
  std::set<Pair, PairLess> pairs_{PairLess{nullptr}};
  std::unordered_set<std::uint64_t> pending_;
  std::vector<ModVec<K>> reduced_;
  Index reduced_index_;
};

// ---------------------------------------------------------------------------
// Conversions between matrices and module vectors.

template <FieldElement K>
ModVec<K> column_to_vec(const Matrix<K>& m, std::size_t j, std::uint32_t offset = 0) {
  ModVec<K> v;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (const auto& t : m.at(i, j).terms()) v.push_back({t.monomial, static_cast<std::uint32_t>(i + offset), t.coeff});
  }
  return v;
}

template <FieldElement K>
ModVec<K> polys_to_vec(const std::vector<Poly<K>>& col, std::uint32_t offset = 0) {
  ModVec<K> v;
  for (std::size_t i = 0; i < col.size(); ++i) {
    for (const auto& t : col[i].terms()) v.push_back({t.monomial, static_cast<std::uint32_t>(i + offset), t.coeff});
  }
  return v;
}

/// Components [begin, end) of v as a polynomial column of length end-begin.
template <FieldElement K>
std::vector<Poly<K>> vec_to_polys(const ModVec<K>& v, const Ring<K>& ring, std::uint32_t begin, std::uint32_t end) {
  std::vector<std::vector<Term<K>>> buckets(end - begin);
  for (const auto& t : v) {
    if (t.comp >= begin && t.comp < end) buckets[t.comp - begin].push_back({t.monomial, t.coeff});
  }
  std::vector<Poly<K>> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(Poly<K>::from_terms(ring.descriptor(), std::move(b)));
  return out;
}

/// Columns g * e_i for every quotient generator g and every row i: the J-multiples
/// that lift a module over R/J to one over R.
template <FieldElement K>
Matrix<K> quotient_relations(const Ring<K>& ring, const std::vector<Degree>& row_degrees) {
  Matrix<K> m(ring, row_degrees, {});
  for (const auto& g : ring.quotient()) {
    for (std::size_t i = 0; i < row_degrees.size(); ++i) {
      std::vector<Poly<K>> col(row_degrees.size(), ring.zero());
      col[i] = g;
      m.append_column(col, row_degrees[i] + g.max_degree());
    }
  }
  return m;
}

/// Gröbner basis of the submodule generated by the columns of `gens` plus the
/// quotient-ring multiples, under the degree-shifted term-over-position order.
template <FieldElement K>
ModuleGB<K> submodule_gb(const Matrix<K>& gens) {
  const Ring<K>& ring = gens.ring();
  std::vector<ModVec<K>> vs;
  for (std::size_t j = 0; j < gens.cols(); ++j) vs.push_back(column_to_vec(gens, j));
  const Matrix<K> q = quotient_relations(ring, gens.row_degrees());
  for (std::size_t j = 0; j < q.cols(); ++j) vs.push_back(column_to_vec(q, j));
  return ModuleGB<K>(ring, ModuleOrder::top(ring.order(), gens.row_degrees()), std::move(vs));
}

/// Elimination Gröbner basis of {(A v + rho, v)}: source A (m x n) tracked in a
/// second block, relations `rel` (m x k, plus quotient multiples) untracked. It
/// decides membership in im(A) + rel, solves A v = b modulo rel, and yields
/// generators of {v : A v in rel}.
template <FieldElement K>
class TrackedBasis {
 public:
  TrackedBasis(const Matrix<K>& a, const Matrix<K>& rel) : ring_(a.ring()), rows_(a.rows()), cols_(a.cols()) {
    if (rel.rows() != a.rows()) throw InvalidArgument("relation matrix row mismatch");
    source_degrees_ = a.col_degrees();
    ModuleOrder ord;
    ord.base = ring_.order();
    ord.shifts = a.row_degrees();
    ord.blocks.assign(rows_, 0);
    for (std::size_t j = 0; j < cols_; ++j) {
      // Shift tracked components by the column sugar so every generator is homogeneous when A is.
      ord.shifts.push_back(a.infer_column_degree(j).value_or(a.column_sugar(j)));
      ord.blocks.push_back(1);
    }
    std::vector<ModVec<K>> vs;
    for (std::size_t j = 0; j < cols_; ++j) {
      ModVec<K> v = column_to_vec(a, j);
      v.push_back({Monomial{}, static_cast<std::uint32_t>(rows_ + j), K::one(ring_.field())});
      vs.push_back(std::move(v));
    }
    for (std::size_t j = 0; j < rel.cols(); ++j) vs.push_back(column_to_vec(rel, j));
    const Matrix<K> q = quotient_relations(ring_, a.row_degrees());
    for (std::size_t j = 0; j < q.cols(); ++j) vs.push_back(column_to_vec(q, j));
    tracked_shifts_.assign(ord.shifts.begin() + static_cast<std::ptrdiff_t>(rows_), ord.shifts.end());
    gb_.emplace(ring_, std::move(ord), std::move(vs));
  }

  /// Generators (as columns) of {v : A v in rel + J}.
  Matrix<K> kernel() const {
    Matrix<K> k(ring_, tracked_shifts_, {});
    for (const auto& g : gb_->basis()) {
      if (g.front().comp < rows_) continue;
      ModVec<K> shifted;
      for (const auto& t : g) shifted.push_back(t);
      const auto col = vec_to_polys(shifted, ring_, static_cast<std::uint32_t>(rows_),
                                    static_cast<std::uint32_t>(rows_ + cols_));
      k.append_column(col, gb_detail::sugar_of(g, gb_->order()));
    }
    return k;
  }

  /// v with A v == b modulo rel + J, when it exists.
  std::optional<std::vector<Poly<K>>> lift(const std::vector<Poly<K>>& b) const {
    ModVec<K> r = gb_->normal_form(polys_to_vec(b));
    for (const auto& t : r) {
      if (t.comp < rows_) return std::nullopt;
    }
    auto v = vec_to_polys(r, ring_, static_cast<std::uint32_t>(rows_), static_cast<std::uint32_t>(rows_ + cols_));
    for (auto& p : v) p = -p;
    return v;
  }

  bool contains(const std::vector<Poly<K>>& b) const {
    ModVec<K> r = gb_->normal_form(polys_to_vec(b));
    return r.empty() || r.front().comp >= rows_;
  }

  const ModuleGB<K>& gb() const { return *gb_; }

 private:
  Ring<K> ring_;
  std::size_t rows_, cols_;
  std::vector<Degree> source_degrees_;
  std::vector<Degree> tracked_shifts_;
  std::optional<ModuleGB<K>> gb_;
};

}  // namespace koszulab
