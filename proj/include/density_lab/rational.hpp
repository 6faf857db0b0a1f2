#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace density_lab {

// Exact rational number backed by GMP. All group arithmetic, measures and
// densities in the library are carried in this type; doubles only appear
// in rendered approximations.
class Rational {
 public:
  Rational() = default;
  template <std::integral T>
  Rational(T v) : v_(mpz_class(static_cast<long>(v))) {}  // NOLINT(google-explicit-constructor)
  Rational(long long num, long long den);
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  // Accepts "p", "p/q" and plain decimals such as "-0.25" or "1e-6".
  static Rational parse(std::string_view text);

  // Canonical text: "p" for integers, otherwise "p/q" with q > 0.
  std::string str() const;
  double to_double() const { return v_.get_d(); }

  const mpq_class& raw() const noexcept { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }

  Rational floor() const;
  Rational ceil() const;
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }
  // Throws PreconditionError when not an integer or out of int64 range.
  std::int64_t to_int64() const;

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(mpq_class(-v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

// x mod p reduced into [0, p); p > 0.
Rational mod(const Rational& x, const Rational& p);
// Least positive common multiple of two positive rationals.
Rational lcm(const Rational& a, const Rational& b);
// Least common multiple of the denominators of the given values.
mpz_class common_denominator(std::initializer_list<Rational> values);

// A nonnegative quantity that may be certified infinite (window masses of
// accumulating configurations, Haar measure of unbounded periodic sets).
class ExtRational {
 public:
  ExtRational() = default;
  ExtRational(Rational v) : value_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  ExtRational(int v) : value_(Rational(v)) {}        // NOLINT(google-explicit-constructor)
  static ExtRational infinity() { ExtRational e; e.value_.reset(); return e; }

  bool is_infinite() const noexcept { return !value_.has_value(); }
  bool is_finite() const noexcept { return value_.has_value(); }
  // Throws PreconditionError on infinity.
  const Rational& value() const;
  std::string str() const { return is_infinite() ? "inf" : value_->str(); }

  friend ExtRational operator+(const ExtRational& a, const ExtRational& b);
  friend bool operator==(const ExtRational& a, const ExtRational& b) = default;
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b);

 private:
  std::optional<Rational> value_ = Rational(0);
};

std::ostream& operator<<(std::ostream& os, const ExtRational& r);

}  // namespace density_lab

template <>
struct std::hash<density_lab::Rational> {
  std::size_t operator()(const density_lab::Rational& r) const noexcept;
};
