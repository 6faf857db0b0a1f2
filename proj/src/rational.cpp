#include "density_lab/rational.hpp"

#include <ostream>

#include "density_lab/errors.hpp"

namespace density_lab {

namespace {

mpz_class parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) throw ParseError("empty integer in rational '" + std::string(whole) + "'");
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size()) throw ParseError("malformed rational '" + std::string(whole) + "'");
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9')
      throw ParseError("malformed rational '" + std::string(whole) + "'");
  }
  std::string digits(text[0] == '+' ? text.substr(1) : text);
  return mpz_class(digits, 10);
}

mpz_class pow10(unsigned long e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, e);
  return out;
}

}  // namespace

Rational::Rational(long long num, long long den) {
  if (den == 0) throw PreconditionError("rational with zero denominator");
  v_ = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty rational");
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash), text);
    mpz_class den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    mpq_class q(num, den);
    q.canonicalize();
    return Rational(q);
  }
  // Decimal with optional exponent.
  std::string_view mantissa = text;
  long exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    const mpz_class ez = parse_integer(text.substr(e + 1), text);
    if (!ez.fits_slong_p() || ::abs(ez) > 1000) throw ParseError("exponent out of range in '" + std::string(text) + "'");
    exponent = ez.get_si();
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long fraction_digits = 0;
  bool seen_point = false;
  for (const char c : mantissa) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_point) ++fraction_digits;
    } else {
      throw ParseError("malformed rational '" + std::string(text) + "'");
    }
  }
  if (digits.empty()) throw ParseError("malformed rational '" + std::string(text) + "'");
  mpq_class q{mpz_class(digits, 10)};
  const long shift = exponent - fraction_digits;
  if (shift >= 0) {
    q *= pow10(static_cast<unsigned long>(shift));
  } else {
    q /= pow10(static_cast<unsigned long>(-shift));
  }
  q.canonicalize();
  if (negative) q = -q;
  return Rational(q);
}

std::string Rational::str() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return Rational(mpq_class(q));
}

Rational Rational::ceil() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return Rational(mpq_class(q));
}

std::int64_t Rational::to_int64() const {
  if (!is_integer()) throw PreconditionError("expected an integer, got " + str());
  if (!v_.get_num().fits_slong_p()) throw PreconditionError("integer out of range: " + str());
  return v_.get_num().get_si();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw PreconditionError("division by zero");
  v_ /= o.v_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational mod(const Rational& x, const Rational& p) {
  if (p.sign() <= 0) throw PreconditionError("modulus must be positive, got " + p.str());
  return x - p * (x / p).floor();
}

Rational lcm(const Rational& a, const Rational& b) {
  if (a.sign() <= 0 || b.sign() <= 0) throw PreconditionError("lcm requires positive periods");
  mpz_class num;
  mpz_class den;
  mpz_lcm(num.get_mpz_t(), a.raw().get_num_mpz_t(), b.raw().get_num_mpz_t());
  mpz_gcd(den.get_mpz_t(), a.raw().get_den_mpz_t(), b.raw().get_den_mpz_t());
  return Rational(mpq_class(num, den));
}

mpz_class common_denominator(std::initializer_list<Rational> values) {
  mpz_class out = 1;
  for (const auto& v : values) mpz_lcm(out.get_mpz_t(), out.get_mpz_t(), v.raw().get_den_mpz_t());
  return out;
}

const Rational& ExtRational::value() const {
  if (!value_) throw PreconditionError("value is infinite");
  return *value_;
}

ExtRational operator+(const ExtRational& a, const ExtRational& b) {
  if (a.is_infinite() || b.is_infinite()) return ExtRational::infinity();
  return ExtRational(*a.value_ + *b.value_);
}

std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
  if (a.is_infinite() || b.is_infinite()) {
    if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
    return a.is_infinite() ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return *a.value_ <=> *b.value_;
}

std::ostream& operator<<(std::ostream& os, const ExtRational& r) { return os << r.str(); }

}  // namespace density_lab

std::size_t std::hash<density_lab::Rational>::operator()(const density_lab::Rational& r) const noexcept {
  return std::hash<std::string>{}(r.str());
}
