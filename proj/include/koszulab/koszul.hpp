#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "koszulab/complex.hpp"
#include "koszulab/linalg.hpp"

namespace koszulab {

namespace detail {

template <FieldElement K>
void require_sequence(const std::vector<Poly<K>>& t) {
  if (t.empty()) throw InvalidArgument("sequence must be nonempty");
  for (const auto& f : t) {
    if (f.is_zero()) throw ZeroElement("sequence entries must be nonzero");
  }
}

template <FieldElement K>
Degree homogeneous_degree(const Poly<K>& f) {
  return f.is_homogeneous() ? f.max_degree() : 0;
}

}  // namespace detail

/// K(t^r) for one element: R -> R(r deg t) in degrees 0 and 1, differential t^r.
template <FieldElement K>
FreeComplex<K> koszul_factor(const Ring<K>& ring, const Poly<K>& t, std::uint32_t r) {
  if (t.is_zero()) throw ZeroElement("Koszul factor of the zero element");
  Matrix<K> m(ring, {-static_cast<Degree>(r) * detail::homogeneous_degree(t)}, {0});
  m.set(0, 0, t.pow(r));
  return two_term(m, 0);
}

/// K(t^r) (x) M = K(t_1^r) (x) ... (x) K(t_mu^r) (x) M[0].
template <FieldElement K>
FreeComplex<K> koszul_complex(const Ring<K>& ring, const std::vector<Poly<K>>& t, std::uint32_t r,
                              const std::type_identity_t<std::optional<FpModule<K>>>& coefficients = std::nullopt) {
  detail::require_sequence(t);
  if (r < 1) throw BadBounds("Koszul power must be positive");
  FreeComplex<K> acc = koszul_factor(ring, t[0], r);
  for (std::size_t i = 1; i < t.size(); ++i) acc = tensor(acc, koszul_factor(ring, t[i], r));
  if (coefficients) acc = tensor(acc, FreeComplex<K>::concentrated(*coefficients, 0));
  return acc;
}

/// K(t^r) -> K(t^s): identity in degree 0 and t^{s-r} in degree 1 of every factor.
template <FieldElement K>
ComplexMap<K> koszul_transition(const Ring<K>& ring, const std::vector<Poly<K>>& t, std::uint32_t r, std::uint32_t s,
                                const std::type_identity_t<std::optional<FpModule<K>>>& coefficients = std::nullopt) {
  detail::require_sequence(t);
  if (r < 1 || s < r) throw BadBounds("transition needs 1 <= r <= s");
  auto factor_map = [&](const Poly<K>& ti) {
    const FreeComplex<K> a = koszul_factor(ring, ti, r);
    const FreeComplex<K> b = koszul_factor(ring, ti, s);
    Matrix<K> m1(ring, b.degrees(1), a.degrees(1));
    m1.set(0, 0, ti.pow(s - r));
    return ComplexMap<K>(a, b, {{0, Matrix<K>::identity(ring, {0})}, {1, m1}}, false);
  };
  ComplexMap<K> acc = factor_map(t[0]);
  for (std::size_t i = 1; i < t.size(); ++i) {
    const ComplexMap<K> next = factor_map(t[i]);
    acc = tensor_maps(acc, next, tensor(acc.source(), next.source()), tensor(acc.target(), next.target()));
  }
  if (coefficients) {
    const FreeComplex<K> mc = FreeComplex<K>::concentrated(*coefficients, 0);
    const ComplexMap<K> id = ComplexMap<K>::identity(mc);
    acc = tensor_maps(acc, id, tensor(acc.source(), mc), tensor(acc.target(), mc));
  }
  return acc;
}

/// Signed permutation K(sigma t) -> K(t), where (sigma t)_j = t_{sigma(j)}:
/// e'_{j1} ^ ... ^ e'_{jk} maps to e_{sigma(j1)} ^ ... ^ e_{sigma(jk)}.
template <FieldElement K>
ComplexMap<K> koszul_permutation_map(const Ring<K>& ring, const std::vector<Poly<K>>& t,
                                     const std::vector<std::size_t>& sigma, std::uint32_t r) {
  if (sigma.size() != t.size()) throw InvalidArgument("permutation length mismatch");
  std::vector<Poly<K>> permuted;
  for (auto j : sigma) {
    if (j >= t.size()) throw InvalidArgument("permutation index out of range");
    permuted.push_back(t[j]);
  }
  const FreeComplex<K> src = koszul_complex(ring, permuted, r);
  const FreeComplex<K> tgt = koszul_complex(ring, t, r);
  std::map<int, Matrix<K>> comps;
  for (int n = 0; n <= static_cast<int>(t.size()); ++n) {
    std::map<std::vector<int>, std::size_t> tpos;
    for (std::size_t k = 0; k < tgt.rank(n); ++k) tpos[tgt.keys(n)[k]] = k;
    Matrix<K> m(ring, tgt.degrees(n), src.degrees(n));
    for (std::size_t col = 0; col < src.rank(n); ++col) {
      const auto& key = src.keys(n)[col];  // key[j] == 0 marks factor j in the wedge
      std::vector<std::size_t> image;
      for (std::size_t j = 0; j < key.size(); ++j) {
        if (key[j] == 0) image.push_back(sigma[j]);
      }
      std::size_t inversions = 0;
      for (std::size_t a = 0; a < image.size(); ++a) {
        for (std::size_t b = a + 1; b < image.size(); ++b) inversions += image[a] > image[b] ? 1 : 0;
      }
      std::vector<int> tkey(t.size(), 1);
      for (auto j : image) tkey[j] = 0;
      m.set(tpos.at(tkey), col, inversions % 2 == 0 ? ring.one() : -ring.one());
    }
    comps[n] = std::move(m);
  }
  return ComplexMap<K>(src, tgt, std::move(comps));
}

/// Degreewise split sequence 0 -> K(t'^r) (x) R(r deg t_mu)[-1] -> K(t^r) -> K(t'^r) -> 0,
/// t' = (t_1..t_{mu-1}), obtained from R(r deg t_mu)[-1] -> K(t_mu^r) -> R by tensoring.
template <FieldElement K>
struct KoszulSplit {
  FreeComplex<K> sub, whole, quotient;
  ComplexMap<K> inclusion, projection;
};

template <FieldElement K>
KoszulSplit<K> koszul_split_sequence(const Ring<K>& ring, const std::vector<Poly<K>>& t, std::uint32_t r) {
  detail::require_sequence(t);
  if (t.size() < 2) throw InvalidArgument("split sequence needs at least two elements");
  const std::vector<Poly<K>> head(t.begin(), t.end() - 1);
  const FreeComplex<K> kh = koszul_complex(ring, head, r);
  const FreeComplex<K> last = koszul_factor(ring, t.back(), r);
  const FreeComplex<K> top = FreeComplex<K>::concentrated(FpModule<K>::free(ring, last.degrees(1)), 1);
  const FreeComplex<K> bottom = FreeComplex<K>::concentrated(FpModule<K>::free(ring, {0}), 0);
  const ComplexMap<K> in_last(top, last, {{1, Matrix<K>::identity(ring, last.degrees(1))}});
  const ComplexMap<K> out_last(last, bottom, {{0, Matrix<K>::identity(ring, {0})}});
  const ComplexMap<K> id = ComplexMap<K>::identity(kh);
  KoszulSplit<K> s;
  s.sub = tensor(kh, top);
  s.whole = tensor(kh, last);
  s.quotient = tensor(kh, bottom);
  s.inclusion = tensor_maps(id, in_last, s.sub, s.whole);
  s.projection = tensor_maps(id, out_last, s.whole, s.quotient);
  return s;
}

enum class TowerDirection { Direct, DualInverse };

/// Lazily materialized tower of Koszul stages. Direct: stage r = K(t^r) (x) M with
/// transitions r -> s. Dual: stage r = Hom(K(t^r), P) with transitions s -> r.
template <FieldElement K>
class KoszulTower {
 public:
  KoszulTower(Ring<K> ring, std::vector<Poly<K>> t, std::uint32_t r_max, TowerDirection direction,
              std::optional<FpModule<K>> module = std::nullopt)
      : ring_(std::move(ring)), t_(std::move(t)), r_max_(r_max), direction_(direction), module_(std::move(module)),
        memo_(std::make_shared<Memo>()) {
    detail::require_sequence(t_);
    if (r_max_ < 1) throw BadBounds("r_max must be positive");
    if (direction_ == TowerDirection::DualInverse && !module_) throw InvalidArgument("dual tower needs a module P");
  }

  const Ring<K>& ring() const noexcept { return ring_; }
  const std::vector<Poly<K>>& sequence() const noexcept { return t_; }
  std::uint32_t r_max() const noexcept { return r_max_; }
  TowerDirection direction() const noexcept { return direction_; }

  FreeComplex<K> koszul(std::uint32_t r) const {
    check(r);
    return cached(memo_->koszul, r, [&] {
      return koszul_complex(ring_, t_, r, direction_ == TowerDirection::Direct ? module_ : std::nullopt);
    });
  }

  FreeComplex<K> stage(std::uint32_t r) const {
    if (direction_ == TowerDirection::Direct) return koszul(r);
    check(r);
    return cached(memo_->stages, r, [&] { return hom(koszul(r), FreeComplex<K>::concentrated(*module_, 0)); });
  }

  /// Direct: stage r -> stage s. Dual: stage s -> stage r.
  ComplexMap<K> transition(std::uint32_t r, std::uint32_t s) const {
    check(r);
    check(s);
    if (s < r) throw BadBounds("transition needs r <= s");
    const std::uint64_t key = (static_cast<std::uint64_t>(r) << 32U) | s;
    return cached(memo_->transitions, key, [&] {
      const auto opt = direction_ == TowerDirection::Direct ? module_ : std::nullopt;
      ComplexMap<K> kt = koszul_transition(ring_, t_, r, s, opt);
      kt = ComplexMap<K>(koszul(r), koszul(s), components(kt), false);
      if (direction_ == TowerDirection::Direct) return kt;
      const FreeComplex<K> p = FreeComplex<K>::concentrated(*module_, 0);
      return hom_precompose(kt, p, stage(s), stage(r));
    });
  }

 private:
  struct Memo {
    std::mutex mutex;
    std::map<std::uint64_t, FreeComplex<K>> koszul;
    std::map<std::uint64_t, FreeComplex<K>> stages;
    std::map<std::uint64_t, ComplexMap<K>> transitions;
  };

  static std::map<int, Matrix<K>> components(const ComplexMap<K>& f) {
    std::map<int, Matrix<K>> out;
    for (int n = f.source().lo(); n <= f.source().hi(); ++n) out[n] = f.component(n);
    return out;
  }

  template <class V, class F>
  V cached(std::map<std::uint64_t, V>& table, std::uint64_t key, F&& make) const {
    {
      std::lock_guard<std::mutex> lock(memo_->mutex);
      auto it = table.find(key);
      if (it != table.end()) return it->second;
    }
    V value = make();
    std::lock_guard<std::mutex> lock(memo_->mutex);
    return table.emplace(key, std::move(value)).first->second;
  }

  void check(std::uint32_t r) const {
    if (r < 1 || r > r_max_) throw BadBounds("stage " + std::to_string(r) + " outside [1, " + std::to_string(r_max_) + "]");
  }

  Ring<K> ring_;
  std::vector<Poly<K>> t_;
  std::uint32_t r_max_;
  TowerDirection direction_;
  std::optional<FpModule<K>> module_;
  std::shared_ptr<Memo> memo_;
};

template <FieldElement K>
KoszulTower<K> dual_koszul_tower(const Ring<K>& ring, const std::vector<Poly<K>>& t, const FpModule<K>& p,
                                 std::uint32_t r_max) {
  return KoszulTower<K>(ring, t, r_max, TowerDirection::DualInverse, p);
}

struct LocalizationRow {
  Degree degree = 0;
  std::vector<std::size_t> stage_dims;     // dim R(r deg t)_d, r = 0..r_max
  std::vector<std::size_t> image_dims;     // dim of the image of stage r in stage r_max
  std::vector<std::size_t> filtered_dims;  // dim of z-degree <= r part of R[z]/(zt - 1) in degree d
  bool stable = false;
  bool agrees = false;
};

struct LocalizationReport {
  std::uint32_t r_max = 0;
  std::vector<LocalizationRow> rows;
  bool all_agree() const {
    for (const auto& r : rows) {
      if (!r.agrees) return false;
    }
    return true;
  }
};

/// Compares the direct system R -t-> R(deg t) -t-> R(2 deg t) -> ... with the
/// z-filtration of the localization R[z]/(zt - 1), degree by degree.
template <FieldElement K>
LocalizationReport localization_colimit_check(const Ring<K>& ring, const Poly<K>& t, Degree lo, Degree hi,
                                              std::uint32_t r_max) {
  if (t.is_zero()) throw ZeroElement("localization at the zero element");
  if (!ring.is_graded() || !t.is_homogeneous()) throw NotGraded("localization check needs a graded ring and homogeneous t");
  if (lo > hi) throw BadBounds("empty degree window");
  const Degree e = t.max_degree();
  auto stage = [&](std::uint32_t r) { return FpModule<K>::free(ring, {-static_cast<Degree>(r) * e}); };

  // R[z]/(J, z t - 1) with a fresh variable z.
  std::vector<std::string> vars = ring.descriptor()->variables();
  std::string z = "z";
  while (ring.descriptor()->index_of(z)) z += "_";
  vars.push_back(z);
  std::vector<std::uint16_t> weights(ring.weights().begin(), ring.weights().begin() + static_cast<std::ptrdiff_t>(ring.num_variables()));
  weights.push_back(1);
  const Ring<K> ext = Ring<K>::polynomial(ring.field(), vars, ring.order(), weights);
  auto embed = [&](const Poly<K>& f) {
    std::vector<Term<K>> ts;
    for (const auto& term : f.terms()) ts.push_back({term.monomial, term.coeff});
    return Poly<K>::from_terms(ext.descriptor(), ts);
  };
  std::vector<Poly<K>> rel;
  for (const auto& g : ring.quotient()) rel.push_back(embed(g));
  const Poly<K> zv = ext.variable(ring.num_variables());
  rel.push_back(zv * embed(t) - ext.one());
  const Ideal<K> loc(ext, rel);

  LocalizationReport report;
  report.r_max = r_max;
  for (Degree d = lo; d <= hi; ++d) {
    LocalizationRow row;
    row.degree = d;
    const FpModule<K> top = stage(r_max);
    for (std::uint32_t r = 0; r <= r_max; ++r) {
      const FpModule<K> sr = stage(r);
      row.stage_dims.push_back(sr.dimension(d));
      Matrix<K> m(ring, top.degrees(), sr.degrees());
      m.set(0, 0, t.pow(r_max - r));
      row.image_dims.push_back(dense_rank(ModuleMap<K>(sr, top, m, false).degree_piece(d)));
      std::vector<Poly<K>> nfs;
      for (std::uint32_t b = 0; b <= r; ++b) {
        for (const auto& mono : monomials_of_degree(ring, d + static_cast<Degree>(b) * e)) {
          nfs.push_back(loc.normal_form(embed(Poly<K>::term(ring.descriptor(), mono, K::one(ring.field()))) * zv.pow(b)));
        }
      }
      row.filtered_dims.push_back(polynomial_span_rank(nfs));
    }
    const std::size_t n = row.image_dims.size();
    row.stable = n >= 2 && row.image_dims[n - 1] == row.image_dims[n - 2];
    row.agrees = row.image_dims == row.filtered_dims;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace koszulab
