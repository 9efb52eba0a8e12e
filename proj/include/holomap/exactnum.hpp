#pragma once

// Exact arithmetic in Q and in the real quadratic field Q(sqrt 2).

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "holomap/error.hpp"

namespace holomap {

using BigInt = boost::multiprecision::cpp_int;

namespace detail {
using WideFloat = boost::multiprecision::cpp_bin_float_100;

inline int sign_of(const BigInt& x) { return x.sign(); }

inline std::optional<std::uint64_t> to_u64(const BigInt& x) {
  if (x < 0 || x > BigInt(std::numeric_limits<std::uint64_t>::max())) return std::nullopt;
  return static_cast<std::uint64_t>(x);
}

inline std::optional<std::int64_t> to_i64(const BigInt& x) {
  if (x < BigInt(std::numeric_limits<std::int64_t>::min()) ||
      x > BigInt(std::numeric_limits<std::int64_t>::max()))
    return std::nullopt;
  return static_cast<std::int64_t>(x);
}
}  // namespace detail

/// Reduced fraction num/den with den >= 1. Zero is 0/1.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(const BigInt& n) : value_(n) {}
  Rational(const BigInt& n, const BigInt& d) {
    if (d == 0) throw Error(ErrorCode::division_by_zero, "rational with zero denominator");
    value_ = d < 0 ? Backing(BigInt(-n), BigInt(-d)) : Backing(n, d);
  }

  BigInt num() const { return boost::multiprecision::numerator(value_); }
  BigInt den() const { return boost::multiprecision::denominator(value_); }

  int sign() const { return value_.sign(); }
  bool is_zero() const { return value_.is_zero(); }
  bool is_integer() const { return den() == 1; }

  Rational operator-() const { return Rational(Backing(-value_)); }
  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(Backing(a.value_ + b.value_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(Backing(a.value_ - b.value_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(Backing(a.value_ * b.value_)); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw Error(ErrorCode::division_by_zero, "rational division by zero");
    return Rational(Backing(a.value_ / b.value_));
  }
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// Correctly rounded up to the working precision of detail::WideFloat.
  detail::WideFloat to_wide() const {
    return detail::WideFloat(num()) / detail::WideFloat(den());
  }
  double to_double() const { return to_wide().convert_to<double>(); }

  std::string to_string() const {
    if (is_integer()) return num().str();
    return num().str() + "/" + den().str();
  }

 private:
  using Backing = boost::multiprecision::cpp_rational;
  explicit Rational(Backing v) : value_(std::move(v)) {}
  Backing value_;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

/// u + v*sqrt(2) with u, v rational. The representation is unique because sqrt 2 is irrational.
class ExactScalar {
 public:
  ExactScalar() = default;
  ExactScalar(std::int64_t u) : u_(u) {}        // NOLINT(google-explicit-constructor)
  ExactScalar(Rational u) : u_(std::move(u)) {}  // NOLINT(google-explicit-constructor)
  ExactScalar(Rational u, Rational v) : u_(std::move(u)), v_(std::move(v)) {}

  static ExactScalar sqrt2() { return {Rational(0), Rational(1)}; }

  const Rational& u() const { return u_; }
  const Rational& v() const { return v_; }

  bool is_zero() const { return u_.is_zero() && v_.is_zero(); }
  bool is_rational() const { return v_.is_zero(); }
  bool is_integer() const { return is_rational() && u_.is_integer(); }
  bool is_natural() const { return is_integer() && u_.sign() > 0; }

  std::optional<Rational> as_rational() const {
    if (!is_rational()) return std::nullopt;
    return u_;
  }
  std::optional<std::uint64_t> as_natural() const {
    if (!is_natural()) return std::nullopt;
    return detail::to_u64(u_.num());
  }

  /// u^2 - 2 v^2; nonzero for every nonzero element.
  Rational norm() const { return u_ * u_ - Rational(2) * v_ * v_; }
  ExactScalar conjugate() const { return {u_, -v_}; }

  int sign() const {
    int su = u_.sign();
    int sv = v_.sign();
    if (sv == 0) return su;
    if (su == 0 || su == sv) return sv;
    // opposite signs: the larger of u^2 and 2 v^2 wins
    int c = (u_ * u_ - Rational(2) * v_ * v_).sign();
    return c > 0 ? su : sv;
  }

  ExactScalar operator-() const { return {-u_, -v_}; }
  friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) { return {a.u_ + b.u_, a.v_ + b.v_}; }
  friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) { return {a.u_ - b.u_, a.v_ - b.v_}; }
  friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
    return {a.u_ * b.u_ + Rational(2) * a.v_ * b.v_, a.u_ * b.v_ + a.v_ * b.u_};
  }
  friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) {
    if (b.is_zero()) throw Error(ErrorCode::division_by_zero, "scalar division by zero");
    Rational n = b.norm();
    ExactScalar t = a * b.conjugate();
    return {t.u_ / n, t.v_ / n};
  }
  ExactScalar& operator+=(const ExactScalar& b) { return *this = *this + b; }
  ExactScalar& operator-=(const ExactScalar& b) { return *this = *this - b; }
  ExactScalar& operator*=(const ExactScalar& b) { return *this = *this * b; }
  ExactScalar& operator/=(const ExactScalar& b) { return *this = *this / b; }

  friend bool operator==(const ExactScalar& a, const ExactScalar& b) { return a.u_ == b.u_ && a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const ExactScalar& a, const ExactScalar& b) {
    int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// Nearest double. When u and v have opposite signs the value is formed as
  /// norm / (u - v sqrt 2) so that no cancellation occurs.
  double to_double() const {
    using detail::WideFloat;
    if (v_.is_zero()) return u_.to_double();
    static const WideFloat root2 = boost::multiprecision::sqrt(WideFloat(2));
    if (u_.sign() * v_.sign() >= 0) return (u_.to_wide() + v_.to_wide() * root2).convert_to<double>();
    WideFloat den = u_.to_wide() - v_.to_wide() * root2;
    return (norm().to_wide() / den).convert_to<double>();
  }

  /// Text form `u`, `a/b`, `u+v*s2`, `u-v*s2`; u is always written when v != 0.
  std::string to_string() const {
    if (v_.is_zero()) return u_.to_string();
    std::string out = u_.to_string();
    out += v_.sign() < 0 ? "-" : "+";
    out += (v_.sign() < 0 ? -v_ : v_).to_string();
    out += "*s2";
    return out;
  }

 private:
  Rational u_;
  Rational v_;
};

inline std::ostream& operator<<(std::ostream& os, const ExactScalar& a) { return os << a.to_string(); }

struct ScalarClass {
  enum class Kind { natural, integer, rational, irrational };
  Kind kind = Kind::irrational;
  std::optional<Rational> value;  // set unless irrational
  friend bool operator==(const ScalarClass&, const ScalarClass&) = default;
};

/// Natural means a positive integer; zero classifies as integer.
inline ScalarClass classify_scalar(const ExactScalar& a) {
  using K = ScalarClass::Kind;
  if (!a.is_rational()) return {K::irrational, std::nullopt};
  const Rational& r = a.u();
  if (!r.is_integer()) return {K::rational, r};
  if (r.sign() > 0) return {K::natural, r};
  return {K::integer, r};
}

inline double to_float(const ExactScalar& a) { return a.to_double(); }

}  // namespace holomap
