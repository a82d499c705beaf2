#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "koszulab/groebner.hpp"

namespace koszulab {

/// Ideal of the working ring R/J, given by generators. The reduced Gröbner basis
/// (of the preimage in R, so it contains J) is computed once and shared between copies.
template <FieldElement K>
class Ideal {
 public:
  Ideal() = default;
  Ideal(Ring<K> ring, std::vector<Poly<K>> generators) : ring_(std::move(ring)), state_(std::make_shared<State>()) {
    for (auto& g : generators) {
      if (!same_ring(g.ring(), ring_.descriptor())) throw MixedRings("ideal generator from another ring");
      if (!g.is_zero()) gens_.push_back(std::move(g));
    }
  }

  const Ring<K>& ring() const noexcept { return ring_; }
  const std::vector<Poly<K>>& generators() const noexcept { return gens_; }

  const ModuleGB<K>& gb() const {
    std::call_once(state_->once, [&] {
      std::vector<ModVec<K>> vs;
      for (const auto& g : gens_) vs.push_back(polys_to_vec<K>({g}));
      for (const auto& g : ring_.quotient()) vs.push_back(polys_to_vec<K>({g}));
      state_->gb = std::make_shared<const ModuleGB<K>>(ring_, ModuleOrder::top(ring_.order(), {0}), std::move(vs));
    });
    return *state_->gb;
  }

  /// Reduced Gröbner basis: monic, sorted ascending by leading monomial.
  std::vector<Poly<K>> groebner_basis() const {
    std::vector<Poly<K>> out;
    for (const auto& v : gb().basis()) out.push_back(vec_to_polys(v, ring_, 0, 1)[0]);
    return out;
  }

  Poly<K> normal_form(const Poly<K>& f) const {
    if (!same_ring(f.ring(), ring_.descriptor())) throw MixedRings("normal form across rings");
    return vec_to_polys(gb().normal_form(polys_to_vec<K>({f})), ring_, 0, 1)[0];
  }

  bool contains(const Poly<K>& f) const { return normal_form(f).is_zero(); }

  bool contains(const Ideal& other) const {
    for (const auto& g : other.gens_) {
      if (!contains(g)) return false;
    }
    return true;
  }

  bool is_unit_ideal() const { return gb().has_unit_in(0); }
  bool is_zero_ideal() const { return Ideal(ring_, {}).contains(*this); }

  friend bool operator==(const Ideal& a, const Ideal& b) { return a.gb().basis() == b.gb().basis(); }

  bool is_homogeneous() const {
    for (const auto& g : gens_) {
      if (!g.is_homogeneous()) return false;
    }
    return true;
  }

 private:
  struct State {
    std::once_flag once;
    std::shared_ptr<const ModuleGB<K>> gb;
  };
  Ring<K> ring_;
  std::vector<Poly<K>> gens_;
  std::shared_ptr<State> state_ = std::make_shared<State>();
};

template <FieldElement K>
Ideal<K> ideal_sum(const Ideal<K>& a, const Ideal<K>& b) {
  auto g = a.generators();
  g.insert(g.end(), b.generators().begin(), b.generators().end());
  return Ideal<K>(a.ring(), std::move(g));
}

template <FieldElement K>
Ideal<K> ideal_product(const Ideal<K>& a, const Ideal<K>& b) {
  std::vector<Poly<K>> g;
  for (const auto& p : a.generators()) {
    for (const auto& q : b.generators()) g.push_back(p * q);
  }
  return Ideal<K>(a.ring(), std::move(g));
}

/// I^n by products of generators (n = 0 gives the unit ideal).
template <FieldElement K>
Ideal<K> ideal_power(const Ideal<K>& a, std::uint32_t n) {
  Ideal<K> acc(a.ring(), {a.ring().one()});
  for (std::uint32_t i = 0; i < n; ++i) {
    Ideal<K> next = ideal_product(acc, a);
    acc = Ideal<K>(a.ring(), next.groebner_basis());
  }
  return acc;
}

/// Columns generating the kernel of M over the working ring.
template <FieldElement K>
Matrix<K> syzygy_kernel(const Matrix<K>& m) {
  Matrix<K> rel(m.ring(), m.row_degrees(), {});
  return TrackedBasis<K>(m, rel).kernel();
}

/// (I : f).
template <FieldElement K>
Ideal<K> colon(const Ideal<K>& ideal, const Poly<K>& f) {
  if (f.is_zero()) throw ZeroElement("colon by the zero element");
  const Ring<K>& ring = ideal.ring();
  const Degree fd = f.is_homogeneous() ? f.max_degree() : 0;
  Matrix<K> a(ring, {0}, {fd});
  a.set(0, 0, f);
  Matrix<K> rel(ring, {0}, {});
  for (const auto& g : ideal.generators()) rel.append_column({g}, g.max_degree());
  const Matrix<K> k = TrackedBasis<K>(a, rel).kernel();
  std::vector<Poly<K>> gens;
  for (std::size_t j = 0; j < k.cols(); ++j) gens.push_back(k.at(0, j));
  return Ideal<K>(ring, std::move(gens));
}

template <FieldElement K>
struct SaturationResult {
  Ideal<K> ideal;
  std::uint32_t exponent = 0;  // least k with (I : f^k) equal to the saturation
};

/// (I : f^k) for finite k.
template <FieldElement K>
Ideal<K> ideal_quotient(const Ideal<K>& ideal, const Poly<K>& f, std::uint32_t k) {
  if (f.is_zero()) throw ZeroElement("colon by the zero element");
  return colon(ideal, f.pow(k));
}

/// (I : f^infinity) by doubling k until two consecutive quotients agree, then the
/// least stabilizing exponent by bisection.
template <FieldElement K>
SaturationResult<K> saturation(const Ideal<K>& ideal, const Poly<K>& f) {
  if (f.is_zero()) throw ZeroElement("saturation by the zero element");
  Ideal<K> prev = ideal;
  std::uint32_t k = 1;
  Ideal<K> cur = ideal_quotient(ideal, f, k);
  std::uint32_t prev_k = 0;
  while (!(cur == prev)) {
    prev = cur;
    prev_k = k;
    if (k > kMaxExponent / 2) throw DegreeOverflow("saturation exponent exceeds 65535");
    k *= 2;
    cur = ideal_quotient(ideal, f, k);
  }
  // Chain is increasing, so the least stable exponent lies in [lo, prev_k].
  std::uint32_t lo = prev_k == 0 ? 0 : prev_k / 2 + 1, hi = prev_k;
  if (prev_k == 0) return {cur, 0};
  while (lo < hi) {
    const std::uint32_t mid = (lo + hi) / 2;
    const Ideal<K> q = mid == 0 ? ideal : ideal_quotient(ideal, f, mid);
    if (q == cur) hi = mid;
    else lo = mid + 1;
  }
  return {cur, hi};
}

}  // namespace koszulab
