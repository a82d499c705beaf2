#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "koszulab/error.hpp"

namespace koszulab {

inline constexpr std::size_t kMaxVariables = 16;
inline constexpr std::uint32_t kMaxExponent = 0xFFFF;

using Weights = std::array<std::uint16_t, kMaxVariables>;

enum class MonomialOrder { Lex, GRevLex };

/// Exponent vector with its cached weighted degree. Unused slots stay zero.
class Monomial {
 public:
  Monomial() = default;

  static Monomial from_exponents(std::span<const std::uint32_t> exps, const Weights& weights) {
    if (exps.size() > kMaxVariables) throw InvalidArgument("too many variables");
    Monomial m;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] > kMaxExponent) throw DegreeOverflow("exponent exceeds 65535");
      m.exps_[i] = static_cast<std::uint16_t>(exps[i]);
      m.degree_ += static_cast<std::int64_t>(exps[i]) * weights[i];
    }
    return m;
  }

  static Monomial variable(std::size_t index, std::uint32_t power, const Weights& weights) {
    if (index >= kMaxVariables) throw InvalidArgument("variable index out of range");
    if (power > kMaxExponent) throw DegreeOverflow("exponent exceeds 65535");
    Monomial m;
    m.exps_[index] = static_cast<std::uint16_t>(power);
    m.degree_ = static_cast<std::int64_t>(power) * weights[index];
    return m;
  }

  std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
  std::int64_t degree() const noexcept { return degree_; }
  bool is_one() const noexcept { return degree_ == 0 && std::all_of(exps_.begin(), exps_.end(), [](auto e) { return e == 0; }); }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (std::size_t i = 0; i < kMaxVariables; ++i) {
      const std::uint32_t e = std::uint32_t{a.exps_[i]} + b.exps_[i];
      if (e > kMaxExponent) throw DegreeOverflow("exponent exceeds 65535");
      m.exps_[i] = static_cast<std::uint16_t>(e);
    }
    m.degree_ = a.degree_ + b.degree_;
    return m;
  }

  bool divides(const Monomial& b) const noexcept {
    for (std::size_t i = 0; i < kMaxVariables; ++i) {
      if (exps_[i] > b.exps_[i]) return false;
    }
    return true;
  }

  /// b / a, assuming a divides b.
  friend Monomial quotient(const Monomial& b, const Monomial& a) {
    Monomial m;
    for (std::size_t i = 0; i < kMaxVariables; ++i) m.exps_[i] = static_cast<std::uint16_t>(b.exps_[i] - a.exps_[i]);
    m.degree_ = b.degree_ - a.degree_;
    return m;
  }

  friend Monomial lcm(const Monomial& a, const Monomial& b, const Weights& weights) {
    Monomial m;
    for (std::size_t i = 0; i < kMaxVariables; ++i) {
      m.exps_[i] = std::max(a.exps_[i], b.exps_[i]);
      m.degree_ += static_cast<std::int64_t>(m.exps_[i]) * weights[i];
    }
    return m;
  }

  friend bool coprime(const Monomial& a, const Monomial& b) noexcept {
    for (std::size_t i = 0; i < kMaxVariables; ++i) {
      if (a.exps_[i] != 0 && b.exps_[i] != 0) return false;
    }
    return true;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) noexcept { return a.exps_ == b.exps_; }

  std::size_t hash() const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto e : exps_) h = (h ^ e) * 1099511628211ULL;
    return h;
  }

 private:
  std::array<std::uint16_t, kMaxVariables> exps_{};
  std::int64_t degree_ = 0;
};

/// Three-way comparison under a monomial order: positive when a > b.
inline int compare(const Monomial& a, const Monomial& b, MonomialOrder order) noexcept {
  if (order == MonomialOrder::GRevLex) {
    if (a.degree() != b.degree()) return a.degree() > b.degree() ? 1 : -1;
    for (std::size_t i = kMaxVariables; i-- > 0;) {
      if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    }
    return 0;
  }
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
  }
  return 0;
}

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

}  // namespace koszulab
