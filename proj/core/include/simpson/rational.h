#ifndef SIMPSON_RATIONAL_H_
#define SIMPSON_RATIONAL_H_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <numeric>
#include <string>
#include <string_view>

namespace simpson {

namespace detail {
struct BigRational;
struct BigRationalDeleter {
  void operator()(BigRational* p) const noexcept;
};
using BigRationalPtr = std::unique_ptr<BigRational, BigRationalDeleter>;
}  // namespace detail

// Exact rational number of unbounded precision, always in lowest terms with a
// positive denominator.
//
// Values whose numerator and denominator fit in a signed 64-bit word are kept
// inline and combined with 128-bit intermediates; anything larger moves to a
// GMP-backed representation and comes back once it fits again. Both paths
// produce identical results, the split only affects speed.
class Rational {
 public:
  Rational() noexcept = default;
  Rational(std::int64_t value);  // NOLINT(google-explicit-constructor)
  Rational(int value) : Rational(static_cast<std::int64_t>(value)) {}  // NOLINT
  Rational(std::int64_t num, std::int64_t den);

  Rational(const Rational& other);
  Rational(Rational&& other) noexcept;
  Rational& operator=(const Rational& other);
  Rational& operator=(Rational&& other) noexcept;
  ~Rational();

  // Accepts "7", "-3/4", "0.25", "2.5e-3". Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  // Best rational approximation of `value` whose distance to it is at most
  // `tolerance` (continued-fraction expansion, smallest denominator first).
  static Rational from_double(double value, double tolerance = 1e-12);

  int sign() const;
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const;
  bool fits_int64() const { return !big_; }

  // Valid only when fits_int64().
  std::int64_t num_int64() const { return num_; }
  std::int64_t den_int64() const { return den_; }

  std::string num_string() const;
  std::string den_string() const;
  std::string to_string() const;  // "n" or "n/d"
  double to_double() const;

  Rational abs() const { return sign() < 0 ? -*this : *this; }
  Rational reciprocal() const;
  Rational floor() const;
  Rational ceil() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& lhs, const Rational& rhs);
  friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs);

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  __extension__ typedef __int128 Wide;

  static constexpr std::int64_t kMaxSmall = INT64_MAX;

  static bool fits(Wide v) { return v <= kMaxSmall && v >= -kMaxSmall; }
  static std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    return std::gcd(a, b);
  }

  // Stores num/den, both already coprime with den > 0, spilling to the big
  // representation when either part leaves the 64-bit range.
  void assign_reduced(Wide num, Wide den) {
    if (num == 0) {
      num_ = 0;
      den_ = 1;
    } else if (fits(num) && fits(den)) {
      num_ = static_cast<std::int64_t>(num);
      den_ = static_cast<std::int64_t>(den);
    } else {
      spill(num, den);
    }
  }
  void spill(Wide num, Wide den);
  void assign_big(detail::BigRationalPtr big);

  void add_slow(const Rational& rhs, bool subtract);
  void mul_slow(const Rational& rhs);
  void div_slow(const Rational& rhs);
  static std::strong_ordering compare_slow(const Rational& lhs, const Rational& rhs);
  int sign_slow() const;

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  detail::BigRationalPtr big_;

  friend struct detail::BigRational;
};

inline Rational::Rational(std::int64_t value) : num_(value) {
  if (value == INT64_MIN) assign_reduced(Wide{value}, Wide{1});
}

inline int Rational::sign() const {
  if (big_) return sign_slow();
  return (num_ > 0) - (num_ < 0);
}

inline Rational& Rational::operator+=(const Rational& rhs) {
  if (big_ || rhs.big_) {
    add_slow(rhs, false);
    return *this;
  }
  if (den_ == rhs.den_) {
    const Wide n = Wide{num_} + rhs.num_;
    if (den_ == 1) {
      assign_reduced(n, 1);
    } else {
      // Same denominator: only the common factor with the new numerator can cancel.
      const Wide g = std::gcd(static_cast<std::int64_t>(n % den_), den_);
      assign_reduced(n / g, Wide{den_} / g);
    }
    return *this;
  }
  const std::int64_t g = gcd64(den_, rhs.den_);
  if (g == 1) {
    assign_reduced(Wide{num_} * rhs.den_ + Wide{rhs.num_} * den_,
                   Wide{den_} * rhs.den_);
    return *this;
  }
  const Wide t = Wide{num_} * (rhs.den_ / g) + Wide{rhs.num_} * (den_ / g);
  const std::int64_t g2 = gcd64(static_cast<std::int64_t>(t % g), g);
  assign_reduced(t / g2, Wide{den_ / g} * (rhs.den_ / g2));
  return *this;
}

inline Rational& Rational::operator-=(const Rational& rhs) {
  if (big_ || rhs.big_) {
    add_slow(rhs, true);
    return *this;
  }
  Rational negated;
  negated.num_ = -rhs.num_;
  negated.den_ = rhs.den_;
  return *this += negated;
}

inline Rational& Rational::operator*=(const Rational& rhs) {
  if (big_ || rhs.big_) {
    mul_slow(rhs);
    return *this;
  }
  if (num_ == 0 || rhs.num_ == 0) {
    num_ = 0;
    den_ = 1;
    return *this;
  }
  const std::int64_t g1 = gcd64(num_, rhs.den_);
  const std::int64_t g2 = gcd64(rhs.num_, den_);
  assign_reduced(Wide{num_ / g1} * (rhs.num_ / g2), Wide{den_ / g2} * (rhs.den_ / g1));
  return *this;
}

inline Rational& Rational::operator/=(const Rational& rhs) {
  if (big_ || rhs.big_) {
    div_slow(rhs);
    return *this;
  }
  return *this *= rhs.reciprocal();
}

inline bool operator==(const Rational& lhs, const Rational& rhs) {
  if (lhs.big_ || rhs.big_) return Rational::compare_slow(lhs, rhs) == 0;
  return lhs.num_ == rhs.num_ && lhs.den_ == rhs.den_;
}

inline std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
  if (lhs.big_ || rhs.big_) return Rational::compare_slow(lhs, rhs);
  if (lhs.den_ == rhs.den_) return lhs.num_ <=> rhs.num_;
  const Rational::Wide l = Rational::Wide{lhs.num_} * rhs.den_;
  const Rational::Wide r = Rational::Wide{rhs.num_} * lhs.den_;
  return l < r ? std::strong_ordering::less
               : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
}

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace simpson

#endif  // SIMPSON_RATIONAL_H_
