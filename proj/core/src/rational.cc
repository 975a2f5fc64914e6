#include "simpson/rational.h"

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace simpson {
namespace detail {

struct BigRational {
  mpq_class value;
};

void BigRationalDeleter::operator()(BigRational* p) const noexcept { delete p; }

}  // namespace detail

namespace {

using detail::BigRational;
using detail::BigRationalPtr;

BigRationalPtr make_big() { return BigRationalPtr(new BigRational()); }
BigRationalPtr make_big(const BigRational& other) { return BigRationalPtr(new BigRational(other)); }
__extension__ typedef __int128 Wide;
__extension__ typedef unsigned __int128 UWide;

mpz_class wide_to_mpz(Wide v) {
  const bool negative = v < 0;
  UWide magnitude = negative ? UWide(0) - static_cast<UWide>(v) : static_cast<UWide>(v);
  mpz_class high(static_cast<unsigned long>(magnitude >> 64));
  mpz_class low(static_cast<unsigned long>(magnitude & ~std::uint64_t{0}));
  mpz_class out = (high << 64) + low;
  return negative ? mpz_class(-out) : out;
}

bool mpz_fits_small(const mpz_class& z) {
  return z.fits_slong_p() && z.get_si() != std::numeric_limits<long>::min();
}

std::string trim(std::string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(const std::string& s, std::string_view whole) {
  std::string body = s;
  bool negative = false;
  if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
    negative = body[0] == '-';
    body.erase(0, 1);
  }
  if (!all_digits(body)) {
    throw std::invalid_argument("not a rational number: '" + std::string(whole) + "'");
  }
  mpz_class z(body, 10);
  return negative ? mpz_class(-z) : z;
}

mpq_class parse_decimal(const std::string& s, std::string_view whole) {
  std::string mantissa = s;
  long exponent = 0;
  if (auto pos = mantissa.find_first_of("eE"); pos != std::string::npos) {
    const std::string exp_text = mantissa.substr(pos + 1);
    mantissa.resize(pos);
    std::string exp_digits = exp_text;
    if (!exp_digits.empty() && (exp_digits[0] == '+' || exp_digits[0] == '-')) {
      exp_digits.erase(0, 1);
    }
    if (!all_digits(exp_digits) || exp_digits.size() > 6) {
      throw std::invalid_argument("not a rational number: '" + std::string(whole) + "'");
    }
    exponent = std::stol(exp_text);
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '+' || mantissa[0] == '-')) {
    negative = mantissa[0] == '-';
    mantissa.erase(0, 1);
  }
  std::string int_part = mantissa;
  std::string frac_part;
  if (auto dot = mantissa.find('.'); dot != std::string::npos) {
    int_part = mantissa.substr(0, dot);
    frac_part = mantissa.substr(dot + 1);
  }
  if ((int_part.empty() && frac_part.empty()) ||
      (!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part))) {
    throw std::invalid_argument("not a rational number: '" + std::string(whole) + "'");
  }
  mpz_class digits(int_part + frac_part, 10);
  exponent -= static_cast<long>(frac_part.size());
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  mpq_class out = exponent >= 0 ? mpq_class(digits * scale) : mpq_class(digits, scale);
  out.canonicalize();
  return negative ? mpq_class(-out) : out;
}

}  // namespace

// Conversions between the two representations live here so the header never
// sees GMP.
namespace detail {

mpq_class to_mpq(std::int64_t num, std::int64_t den) {
  mpq_class q{mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den))};
  return q;
}

}  // namespace detail

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Wide n = num;
  Wide d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const UWide un = n < 0 ? static_cast<UWide>(-n) : static_cast<UWide>(n);
  // |num|, |den| <= 2^63 so the gcd fits in 64 bits.
  UWide a = un;
  UWide b = static_cast<UWide>(d);
  while (b != 0) {
    UWide t = a % b;
    a = b;
    b = t;
  }
  const Wide g = a == 0 ? 1 : static_cast<Wide>(a);
  assign_reduced(n / g, d / g);
}

Rational::Rational(const Rational& other) : num_(other.num_), den_(other.den_) {
  if (other.big_) big_ = make_big(*other.big_);
}

Rational::Rational(Rational&& other) noexcept
    : num_(other.num_), den_(other.den_), big_(std::move(other.big_)) {
  other.num_ = 0;
  other.den_ = 1;
}

Rational& Rational::operator=(const Rational& other) {
  if (this == &other) return *this;
  num_ = other.num_;
  den_ = other.den_;
  if (other.big_) {
    big_ = make_big(*other.big_);
  } else {
    big_.reset();
  }
  return *this;
}

Rational& Rational::operator=(Rational&& other) noexcept {
  num_ = other.num_;
  den_ = other.den_;
  big_ = std::move(other.big_);
  other.num_ = 0;
  other.den_ = 1;
  return *this;
}

Rational::~Rational() = default;

void Rational::spill(Wide num, Wide den) {
  auto big = make_big();
  big->value = mpq_class(wide_to_mpz(num), wide_to_mpz(den));
  big->value.canonicalize();
  assign_big(std::move(big));
}

void Rational::assign_big(BigRationalPtr big) {
  const mpz_class& n = big->value.get_num();
  const mpz_class& d = big->value.get_den();
  if (mpz_fits_small(n) && mpz_fits_small(d)) {
    num_ = n.get_si();
    den_ = d.get_si();
    big_.reset();
    return;
  }
  num_ = 0;
  den_ = 1;
  big_ = std::move(big);
}

void Rational::add_slow(const Rational& rhs, bool subtract) {
  auto out = make_big();
  const mpq_class lhs_q = big_ ? big_->value : detail::to_mpq(num_, den_);
  const mpq_class rhs_q = rhs.big_ ? rhs.big_->value : detail::to_mpq(rhs.num_, rhs.den_);
  out->value = subtract ? mpq_class(lhs_q - rhs_q) : mpq_class(lhs_q + rhs_q);
  assign_big(std::move(out));
}

void Rational::mul_slow(const Rational& rhs) {
  auto out = make_big();
  const mpq_class lhs_q = big_ ? big_->value : detail::to_mpq(num_, den_);
  const mpq_class rhs_q = rhs.big_ ? rhs.big_->value : detail::to_mpq(rhs.num_, rhs.den_);
  out->value = lhs_q * rhs_q;
  assign_big(std::move(out));
}

void Rational::div_slow(const Rational& rhs) {
  if (rhs.is_zero()) throw std::domain_error("rational division by zero");
  auto out = make_big();
  const mpq_class lhs_q = big_ ? big_->value : detail::to_mpq(num_, den_);
  const mpq_class rhs_q = rhs.big_ ? rhs.big_->value : detail::to_mpq(rhs.num_, rhs.den_);
  out->value = lhs_q / rhs_q;
  assign_big(std::move(out));
}

std::strong_ordering Rational::compare_slow(const Rational& lhs, const Rational& rhs) {
  const mpq_class l = lhs.big_ ? lhs.big_->value : detail::to_mpq(lhs.num_, lhs.den_);
  const mpq_class r = rhs.big_ ? rhs.big_->value : detail::to_mpq(rhs.num_, rhs.den_);
  const int c = cmp(l, r);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

int Rational::sign_slow() const { return sgn(big_->value); }

Rational Rational::parse(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty rational number");
  mpq_class q;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpz_class n = parse_integer(trim(s.substr(0, slash)), text);
    mpz_class d = parse_integer(trim(s.substr(slash + 1)), text);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    q = mpq_class(n, d);
    q.canonicalize();
  } else {
    q = parse_decimal(s, text);
  }
  Rational out;
  auto big = make_big();
  big->value = q;
  out.assign_big(std::move(big));
  return out;
}

Rational Rational::from_double(double value, double tolerance) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite probability input");
  if (tolerance < 0) tolerance = 0;
  // Continued-fraction convergents h/k of value.
  const long double target = value;
  long double x = target;
  std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(x));
  std::int64_t k_prev = 0, k = 1;
  long double frac = x - std::floor(x);
  if (std::fabs(value) < 9e15) {
    for (int iter = 0; iter < 64; ++iter) {
      if (std::fabs(static_cast<long double>(h) / k - target) <= tolerance || frac == 0) {
        return Rational(h, k);
      }
      x = 1.0L / frac;
      const long double a_ld = std::floor(x);
      frac = x - a_ld;
      if (a_ld > 9e15L) break;
      const auto a = static_cast<std::int64_t>(a_ld);
      const Wide h_next = Wide{a} * h + h_prev;
      const Wide k_next = Wide{a} * k + k_prev;
      if (!fits(h_next) || !fits(k_next)) break;
      h_prev = h;
      k_prev = k;
      h = static_cast<std::int64_t>(h_next);
      k = static_cast<std::int64_t>(k_next);
    }
  }
  // Fall back to the exact binary value of the double.
  Rational out;
  auto big = make_big();
  big->value = mpq_class(value);
  out.assign_big(std::move(big));
  return out;
}

bool Rational::is_integer() const {
  if (big_) return big_->value.get_den() == 1;
  return den_ == 1;
}

std::string Rational::num_string() const {
  if (big_) return big_->value.get_num().get_str();
  return std::to_string(num_);
}

std::string Rational::den_string() const {
  if (big_) return big_->value.get_den().get_str();
  return std::to_string(den_);
}

std::string Rational::to_string() const {
  if (is_integer()) return num_string();
  return num_string() + "/" + den_string();
}

double Rational::to_double() const {
  if (big_) return big_->value.get_d();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

Rational Rational::reciprocal() const {
  if (is_zero()) throw std::domain_error("rational division by zero");
  if (big_) {
    auto out = make_big();
    mpq_inv(out->value.get_mpq_t(), big_->value.get_mpq_t());
    Rational r;
    r.assign_big(std::move(out));
    return r;
  }
  Rational r;
  r.num_ = num_ < 0 ? -den_ : den_;
  r.den_ = num_ < 0 ? -num_ : num_;
  return r;
}

Rational Rational::floor() const {
  if (big_) {
    auto out = make_big();
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), big_->value.get_num_mpz_t(), big_->value.get_den_mpz_t());
    out->value = mpq_class(q);
    Rational r;
    r.assign_big(std::move(out));
    return r;
  }
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return Rational(q);
}

Rational Rational::ceil() const { return -((-*this).floor()); }

Rational Rational::operator-() const {
  if (big_) {
    auto out = make_big();
    out->value = -big_->value;
    Rational r;
    r.assign_big(std::move(out));
    return r;
  }
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace simpson
