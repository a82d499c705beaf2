#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "koszulab/error.hpp"
#include "koszulab/field.hpp"
#include "koszulab/monomial.hpp"

namespace koszulab {

/// Degree sentinel of the zero polynomial.
inline constexpr std::int64_t kMinusInfinity = std::numeric_limits<std::int64_t>::min();

/// Immutable polynomial-ring descriptor: field, variable names, order, weights.
class RingDescriptor {
 public:
  RingDescriptor(FieldDescriptor field, std::vector<std::string> variables, MonomialOrder order,
                 std::vector<std::uint16_t> weights = {})
      : field_(field), variables_(std::move(variables)), order_(order) {
    if (variables_.size() > kMaxVariables) throw InvalidArgument("at most 16 variables are supported");
    std::unordered_set<std::string> seen;
    for (const auto& v : variables_) {
      if (v.empty()) throw InvalidArgument("empty variable name");
      if (!seen.insert(v).second) throw InvalidArgument("duplicate variable name '" + v + "'");
    }
    if (!weights.empty() && weights.size() != variables_.size()) throw InvalidArgument("weights/variables size mismatch");
    weights_.fill(1);
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] == 0) throw InvalidArgument("variable weights must be positive");
      weights_[i] = weights[i];
    }
  }

  const FieldDescriptor& field() const noexcept { return field_; }
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  std::size_t num_variables() const noexcept { return variables_.size(); }
  MonomialOrder order() const noexcept { return order_; }
  const Weights& weights() const noexcept { return weights_; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      if (variables_[i] == name) return i;
    }
    return std::nullopt;
  }

  bool operator==(const RingDescriptor& o) const {
    return field_ == o.field_ && variables_ == o.variables_ && order_ == o.order_ && weights_ == o.weights_;
  }

 private:
  FieldDescriptor field_;
  std::vector<std::string> variables_;
  MonomialOrder order_;
  Weights weights_{};
};

using RingPtr = std::shared_ptr<const RingDescriptor>;

inline bool same_ring(const RingPtr& a, const RingPtr& b) { return a == b || (a && b && *a == *b); }

template <FieldElement K>
struct Term {
  Monomial monomial;
  K coeff;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse polynomial with terms sorted strictly descending under the ring order.
template <FieldElement K>
class Poly {
 public:
  Poly() = default;
  explicit Poly(RingPtr ring) : ring_(std::move(ring)) {}

  static Poly constant(RingPtr ring, const K& c) {
    Poly p(std::move(ring));
    if (!c.is_zero()) p.terms_.push_back({Monomial{}, c});
    return p;
  }

  static Poly term(RingPtr ring, const Monomial& m, const K& c) {
    Poly p(std::move(ring));
    if (!c.is_zero()) p.terms_.push_back({m, c});
    return p;
  }

  /// Builds a canonical polynomial from arbitrary (possibly repeated) terms.
  static Poly from_terms(RingPtr ring, std::vector<Term<K>> terms) {
    Poly p(std::move(ring));
    const MonomialOrder ord = p.ring_->order();
    std::sort(terms.begin(), terms.end(),
              [ord](const Term<K>& a, const Term<K>& b) { return compare(a.monomial, b.monomial, ord) > 0; });
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().monomial == t.monomial) {
        p.terms_.back().coeff += t.coeff;
        if (p.terms_.back().coeff.is_zero()) p.terms_.pop_back();
      } else if (!t.coeff.is_zero()) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }

  const RingPtr& ring() const noexcept { return ring_; }
  const std::vector<Term<K>>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one()); }

  /// Weighted total degree of the leading monomial; kMinusInfinity for zero.
  std::int64_t degree() const noexcept {
    if (terms_.empty()) return kMinusInfinity;
    if (ring_->order() == MonomialOrder::GRevLex) return terms_.front().monomial.degree();
    std::int64_t d = kMinusInfinity;
    for (const auto& t : terms_) d = std::max(d, t.monomial.degree());
    return d;
  }

  /// Largest weighted degree of any term (equals degree() under grevlex).
  std::int64_t max_degree() const noexcept {
    std::int64_t d = kMinusInfinity;
    for (const auto& t : terms_) d = std::max(d, t.monomial.degree());
    return d;
  }

  bool is_homogeneous() const noexcept {
    for (const auto& t : terms_) {
      if (t.monomial.degree() != terms_.front().monomial.degree()) return false;
    }
    return true;
  }

  const Term<K>& leading_term() const {
    if (terms_.empty()) throw ZeroElement("leading term of the zero polynomial");
    return terms_.front();
  }
  const Monomial& leading_monomial() const { return leading_term().monomial; }
  const K& leading_coeff() const { return leading_term().coeff; }

  Poly operator-() const {
    Poly r(*this);
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) { return combine(a, b, false); }
  friend Poly operator-(const Poly& a, const Poly& b) { return combine(a, b, true); }
  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    check_rings(a, b);
    if (a.is_zero() || b.is_zero()) return Poly(a.ring_);
    const Poly& small = a.size() <= b.size() ? a : b;
    const Poly& large = a.size() <= b.size() ? b : a;
    Poly acc(a.ring_);
    for (const auto& t : small.terms_) acc += large.times_term(t.monomial, t.coeff);
    return acc;
  }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  Poly scaled(const K& c) const {
    if (c.is_zero()) return Poly(ring_);
    Poly r(*this);
    for (auto& t : r.terms_) t.coeff = t.coeff * c;
    return r;
  }

  /// Multiplication by c * m; preserves term order.
  Poly times_term(const Monomial& m, const K& c) const {
    Poly r(ring_);
    if (c.is_zero()) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.monomial * m, t.coeff * c});
    return r;
  }

  Poly pow(std::uint32_t e) const {
    Poly result = Poly::constant(ring_, K::one(ring_->field()));
    Poly base = *this;
    while (e > 0) {
      if (e & 1U) result = result * base;
      e >>= 1U;
      if (e > 0) base = base * base;
    }
    return result;
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(leading_coeff().inverse());
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.ring_ && b.ring_ && !same_ring(a.ring_, b.ring_)) return false;
    return a.terms_ == b.terms_;
  }

 private:
  static void check_rings(const Poly& a, const Poly& b) {
    if (!same_ring(a.ring_, b.ring_)) throw MixedRings("polynomials from different rings");
  }

  static Poly combine(const Poly& a, const Poly& b, bool subtract) {
    check_rings(a, b);
    Poly r(a.ring_);
    r.terms_.reserve(a.size() + b.size());
    const MonomialOrder ord = a.ring_->order();
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      int c;
      if (i == a.size()) c = -1;
      else if (j == b.size()) c = 1;
      else c = compare(a.terms_[i].monomial, b.terms_[j].monomial, ord);
      if (c > 0) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (c < 0) {
        const auto& t = b.terms_[j++];
        r.terms_.push_back({t.monomial, subtract ? -t.coeff : t.coeff});
      } else {
        K s = subtract ? a.terms_[i].coeff - b.terms_[j].coeff : a.terms_[i].coeff + b.terms_[j].coeff;
        if (!s.is_zero()) r.terms_.push_back({a.terms_[i].monomial, std::move(s)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  RingPtr ring_;
  std::vector<Term<K>> terms_;
};

/// A polynomial ring R = k[x_1..x_n], optionally with a quotient ideal J (working ring R/J).
/// Polynomials always live in R; module-level operations account for J.
template <FieldElement K>
class Ring {
 public:
  Ring() = default;

  static Ring polynomial(FieldDescriptor field, std::vector<std::string> variables,
                         MonomialOrder order = MonomialOrder::GRevLex, std::vector<std::uint16_t> weights = {}) {
    if (!K::matches(field)) throw MixedFields("coefficient type does not match field " + field.name());
    Ring r;
    r.desc_ = std::make_shared<const RingDescriptor>(field, std::move(variables), order, std::move(weights));
    return r;
  }

  /// Same polynomial ring with quotient ideal J (replacing any previous quotient).
  Ring quotient_by(std::vector<Poly<K>> generators) const {
    Ring r;
    r.desc_ = desc_;
    std::vector<Poly<K>> kept;
    for (auto& g : generators) {
      if (!same_ring(g.ring(), desc_)) throw MixedRings("quotient generator from another ring");
      if (!g.is_zero()) kept.push_back(std::move(g));
    }
    r.quotient_ = std::make_shared<const std::vector<Poly<K>>>(std::move(kept));
    return r;
  }

  Ring ambient() const {
    Ring r;
    r.desc_ = desc_;
    return r;
  }

  const RingPtr& descriptor() const noexcept { return desc_; }
  const FieldDescriptor& field() const { return desc_->field(); }
  std::size_t num_variables() const { return desc_->num_variables(); }
  MonomialOrder order() const { return desc_->order(); }
  const Weights& weights() const { return desc_->weights(); }

  const std::vector<Poly<K>>& quotient() const {
    static const std::vector<Poly<K>> empty;
    return quotient_ ? *quotient_ : empty;
  }
  bool has_quotient() const { return !quotient().empty(); }
  bool is_graded() const {
    return std::all_of(quotient().begin(), quotient().end(), [](const Poly<K>& g) { return g.is_homogeneous(); });
  }

  Poly<K> zero() const { return Poly<K>(desc_); }
  Poly<K> one() const { return Poly<K>::constant(desc_, K::one(field())); }
  Poly<K> constant(long c) const { return Poly<K>::constant(desc_, K::from_integer(field(), c)); }
  Poly<K> constant(const K& c) const { return Poly<K>::constant(desc_, c); }
  K scalar(long c) const { return K::from_integer(field(), c); }

  Poly<K> variable(std::size_t index, std::uint32_t power = 1) const {
    if (index >= num_variables()) throw InvalidArgument("variable index out of range");
    return Poly<K>::term(desc_, Monomial::variable(index, power, weights()), K::one(field()));
  }
  Poly<K> variable(std::string_view name, std::uint32_t power = 1) const {
    auto idx = desc_->index_of(name);
    if (!idx) throw UnknownVariable(std::string(name));
    return variable(*idx, power);
  }
  std::vector<Poly<K>> variables() const {
    std::vector<Poly<K>> out;
    for (std::size_t i = 0; i < num_variables(); ++i) out.push_back(variable(i));
    return out;
  }

  Monomial monomial(std::span<const std::uint32_t> exps) const { return Monomial::from_exponents(exps, weights()); }

  bool same_as(const Ring& o) const {
    if (!same_ring(desc_, o.desc_)) return false;
    return quotient() == o.quotient();
  }

 private:
  RingPtr desc_;
  std::shared_ptr<const std::vector<Poly<K>>> quotient_;
};

template <FieldElement K>
void require_same_ring(const Ring<K>& a, const Ring<K>& b, const char* what) {
  if (!a.same_as(b)) throw MixedRings(what);
}

}  // namespace koszulab
