#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <concepts>
#include <cstdint>
#include <string>

#include "koszulab/error.hpp"

namespace koszulab {

enum class FieldKind { Rationals, PrimeField };

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t p) {
  std::uint64_t result = 1 % p;
  base %= p;
  while (e > 0) {
    if (e & 1U) result = mulmod(result, base, p);
    base = mulmod(base, base, p);
    e >>= 1U;
  }
  return result;
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace detail

/// Immutable description of the coefficient field: Q or F_p.
class FieldDescriptor {
 public:
  static FieldDescriptor rationals() { return FieldDescriptor(FieldKind::Rationals, 0); }

  static FieldDescriptor prime(std::uint64_t p) {
    if (p >= (std::uint64_t{1} << 62U) || !detail::is_prime_u64(p)) {
      throw InvalidArgument("field characteristic " + std::to_string(p) + " is not a prime below 2^62");
    }
    return FieldDescriptor(FieldKind::PrimeField, p);
  }

  FieldKind kind() const noexcept { return kind_; }
  std::uint64_t characteristic() const noexcept { return characteristic_; }

  std::string name() const {
    return kind_ == FieldKind::Rationals ? std::string("Q") : "F" + std::to_string(characteristic_);
  }

  bool operator==(const FieldDescriptor&) const = default;

 private:
  FieldDescriptor(FieldKind kind, std::uint64_t characteristic)
      : kind_(kind), characteristic_(characteristic) {}

  FieldKind kind_;
  std::uint64_t characteristic_;
};

/// Residue in [0, p).
class Zp {
 public:
  Zp() = default;

  static Zp zero(const FieldDescriptor& fd) { return Zp(0, fd.characteristic()); }
  static Zp one(const FieldDescriptor& fd) { return Zp(1, fd.characteristic()); }

  static Zp from_integer(const FieldDescriptor& fd, const mpz_class& n) {
    require_prime(fd);
    const mpz_class p(std::to_string(fd.characteristic()));
    mpz_class r = n % p;
    if (r < 0) r += p;
    return Zp(static_cast<std::uint64_t>(std::stoull(r.get_str())), fd.characteristic());
  }

  static Zp from_integer(const FieldDescriptor& fd, long n) {
    require_prime(fd);
    const auto p = static_cast<__int128>(fd.characteristic());
    __int128 r = static_cast<__int128>(n) % p;
    if (r < 0) r += p;
    return Zp(static_cast<std::uint64_t>(r), fd.characteristic());
  }

  static Zp from_fraction(const FieldDescriptor& fd, const mpz_class& num, const mpz_class& den) {
    return from_integer(fd, num) / from_integer(fd, den);
  }

  static bool matches(const FieldDescriptor& fd) { return fd.kind() == FieldKind::PrimeField; }

  std::uint64_t value() const noexcept { return value_; }
  std::uint64_t modulus() const noexcept { return modulus_; }
  bool is_zero() const noexcept { return value_ == 0; }
  bool is_one() const noexcept { return value_ == 1; }

  Zp inverse() const {
    if (value_ == 0) throw DivisionByZero("inverse of zero in F" + std::to_string(modulus_));
    // Extended Euclid on signed 128-bit to avoid overflow near 2^62.
    __int128 t = 0, new_t = 1;
    __int128 r = modulus_, new_r = value_;
    while (new_r != 0) {
      __int128 q = r / new_r;
      __int128 tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    if (t < 0) t += modulus_;
    return Zp(static_cast<std::uint64_t>(t), modulus_);
  }

  Zp operator-() const { return Zp(value_ == 0 ? 0 : modulus_ - value_, modulus_); }

  friend Zp operator+(const Zp& a, const Zp& b) {
    check_same(a, b);
    std::uint64_t s = a.value_ + b.value_;
    if (s >= a.modulus_) s -= a.modulus_;
    return Zp(s, a.modulus_);
  }
  friend Zp operator-(const Zp& a, const Zp& b) {
    check_same(a, b);
    return Zp(a.value_ >= b.value_ ? a.value_ - b.value_ : a.value_ + a.modulus_ - b.value_, a.modulus_);
  }
  friend Zp operator*(const Zp& a, const Zp& b) {
    check_same(a, b);
    return Zp(detail::mulmod(a.value_, b.value_, a.modulus_), a.modulus_);
  }
  friend Zp operator/(const Zp& a, const Zp& b) {
    check_same(a, b);
    return a * b.inverse();
  }
  Zp& operator+=(const Zp& b) { return *this = *this + b; }
  Zp& operator-=(const Zp& b) { return *this = *this - b; }
  Zp& operator*=(const Zp& b) { return *this = *this * b; }

  friend bool operator==(const Zp&, const Zp&) = default;

  /// Symmetric representative, so that p-1 prints as -1.
  std::string to_string() const {
    if (value_ > modulus_ / 2) return "-" + std::to_string(modulus_ - value_);
    return std::to_string(value_);
  }
  bool is_negative_repr() const noexcept { return value_ > modulus_ / 2; }

 private:
  Zp(std::uint64_t v, std::uint64_t p) : value_(v), modulus_(p) {}

  static void require_prime(const FieldDescriptor& fd) {
    if (fd.kind() != FieldKind::PrimeField) throw MixedFields("prime-field element requested over Q");
  }
  static void check_same(const Zp& a, const Zp& b) {
    if (a.modulus_ != b.modulus_) {
      throw MixedFields("F" + std::to_string(a.modulus_) + " vs F" + std::to_string(b.modulus_));
    }
  }

  std::uint64_t value_ = 0;
  std::uint64_t modulus_ = 0;
};

/// Fully reduced fraction backed by GMP.
class Rational {
 public:
  Rational() = default;

  static Rational zero(const FieldDescriptor&) { return Rational(mpq_class(0)); }
  static Rational one(const FieldDescriptor&) { return Rational(mpq_class(1)); }
  static Rational from_integer(const FieldDescriptor& fd, const mpz_class& n) {
    require_rationals(fd);
    return Rational(mpq_class(n));
  }
  static Rational from_integer(const FieldDescriptor& fd, long n) { return from_integer(fd, mpz_class(n)); }
  static Rational from_fraction(const FieldDescriptor& fd, const mpz_class& num, const mpz_class& den) {
    require_rationals(fd);
    if (den == 0) throw DivisionByZero("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return Rational(std::move(q));
  }
  static bool matches(const FieldDescriptor& fd) { return fd.kind() == FieldKind::Rationals; }

  const mpq_class& value() const noexcept { return value_; }
  bool is_zero() const { return sgn(value_) == 0; }
  bool is_one() const { return value_ == 1; }

  Rational inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero in Q");
    return Rational(mpq_class(1) / value_);
  }

  Rational operator-() const { return Rational(mpq_class(-value_)); }
  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ + b.value_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ - b.value_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ * b.value_)); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw DivisionByZero("division by zero in Q");
    return Rational(mpq_class(a.value_ / b.value_));
  }
  Rational& operator+=(const Rational& b) {
    value_ += b.value_;
    return *this;
  }
  Rational& operator-=(const Rational& b) {
    value_ -= b.value_;
    return *this;
  }
  Rational& operator*=(const Rational& b) {
    value_ *= b.value_;
    return *this;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }

  std::string to_string() const { return value_.get_str(); }
  bool is_negative_repr() const { return sgn(value_) < 0; }

 private:
  explicit Rational(mpq_class v) : value_(std::move(v)) {}

  static void require_rationals(const FieldDescriptor& fd) {
    if (fd.kind() != FieldKind::Rationals) throw MixedFields("rational element requested over F_p");
  }

  mpq_class value_;
};

template <class K>
concept FieldElement = std::regular<K> && requires(const K& a, const K& b, const FieldDescriptor& fd,
                                                    const mpz_class& n) {
  { K::zero(fd) } -> std::same_as<K>;
  { K::one(fd) } -> std::same_as<K>;
  { K::from_integer(fd, n) } -> std::same_as<K>;
  { K::from_fraction(fd, n, n) } -> std::same_as<K>;
  { K::matches(fd) } -> std::same_as<bool>;
  { a + b } -> std::same_as<K>;
  { a - b } -> std::same_as<K>;
  { a * b } -> std::same_as<K>;
  { a / b } -> std::same_as<K>;
  { -a } -> std::same_as<K>;
  { a.inverse() } -> std::same_as<K>;
  { a.is_zero() } -> std::same_as<bool>;
  { a.to_string() } -> std::same_as<std::string>;
};

static_assert(FieldElement<Zp>);
static_assert(FieldElement<Rational>);

/// Default field of the command-line front end.
inline constexpr std::uint64_t kDefaultPrime = 32003;

}  // namespace koszulab
