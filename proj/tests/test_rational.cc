#include <gmpxx.h>
#include <gtest/gtest.h>

#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "simpson/rational.h"

namespace simpson {
namespace {

mpq_class as_mpq(const Rational& r) {
  mpq_class q(mpz_class(r.num_string()), mpz_class(r.den_string()));
  q.canonicalize();
  return q;
}

std::string mpq_string(const mpq_class& q) { return q.get_str(); }

TEST(RationalTest, StoresLowestTerms) {
  const Rational r(6, -8);
  EXPECT_EQ(r.num_int64(), -3);
  EXPECT_EQ(r.den_int64(), 4);
  EXPECT_EQ(r.to_string(), "-3/4");
  EXPECT_EQ(Rational(0, -5).to_string(), "0");
  EXPECT_EQ(Rational(0, -5).den_int64(), 1);
}

TEST(RationalTest, ZeroDenominatorThrows) {
  EXPECT_THROW(Rational(1, 0), std::exception);
  EXPECT_THROW(Rational(1) / Rational(0), std::exception);
}

TEST(RationalTest, ParsesIntegersFractionsAndDecimals) {
  EXPECT_EQ(Rational::parse("7"), Rational(7));
  EXPECT_EQ(Rational::parse("-3/4"), Rational(-3, 4));
  EXPECT_EQ(Rational::parse("0.25"), Rational(1, 4));
  EXPECT_EQ(Rational::parse("2.5e-3"), Rational(1, 400));
  EXPECT_EQ(Rational::parse("1E2"), Rational(100));
  EXPECT_EQ(Rational::parse("123456789012345678901234567890").to_string(),
            "123456789012345678901234567890");
  EXPECT_THROW(Rational::parse(""), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("abc"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1.2.3"), std::invalid_argument);
}

TEST(RationalTest, FromDoubleFindsSimpleFractions) {
  EXPECT_EQ(Rational::from_double(0.7), Rational(7, 10));
  EXPECT_EQ(Rational::from_double(0.1 + 0.2), Rational(3, 10));
  EXPECT_EQ(Rational::from_double(-0.45), Rational(-9, 20));
  EXPECT_EQ(Rational::from_double(1.0 / 3.0), Rational(1, 3));
  EXPECT_EQ(Rational::from_double(0.0), Rational(0));
}

TEST(RationalTest, FloorAndCeil) {
  EXPECT_EQ(Rational(7, 2).floor(), Rational(3));
  EXPECT_EQ(Rational(-7, 2).floor(), Rational(-4));
  EXPECT_EQ(Rational(7, 2).ceil(), Rational(4));
  EXPECT_EQ(Rational(-7, 2).ceil(), Rational(-3));
  EXPECT_EQ(Rational(5).floor(), Rational(5));
}

TEST(RationalTest, OrderingIsExact) {
  // 1/3 and 0.333... differ although their doubles are close.
  EXPECT_LT(Rational::parse("0.3333333333333333333"), Rational(1, 3));
  EXPECT_GT(Rational(2, 3), Rational(1, 2));
  EXPECT_EQ(Rational(2, 4), Rational(1, 2));
}

TEST(RationalTest, OverflowPromotesAndDemotes) {
  const std::int64_t big = std::numeric_limits<std::int64_t>::max();
  Rational r(big);
  r += Rational(1);
  EXPECT_FALSE(r.fits_int64());
  EXPECT_EQ(r.to_string(), "9223372036854775808");
  r -= Rational(1);
  EXPECT_TRUE(r.fits_int64());
  EXPECT_EQ(r, Rational(big));

  Rational tiny(1, big);
  tiny *= Rational(1, big);
  EXPECT_FALSE(tiny.fits_int64());
  tiny *= Rational(big);
  EXPECT_TRUE(tiny.fits_int64());
  EXPECT_EQ(tiny, Rational(1, big));

  const Rational lowest(std::numeric_limits<std::int64_t>::min());
  EXPECT_EQ(lowest.to_string(), "-9223372036854775808");
  EXPECT_EQ((-lowest).to_string(), "9223372036854775808");
}

TEST(RationalTest, StreamsAsText) {
  std::ostringstream os;
  os << Rational(-5, 10);
  EXPECT_EQ(os.str(), "-1/2");
}

// Random expression chains checked against GMP, mixing small operands with
// ones near the 64-bit boundary so both representations are exercised.
TEST(RationalTest, MatchesGmpOnRandomChains) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> op_dist(0, 3);
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<std::int64_t> small(-50, 50);
  std::uniform_int_distribution<std::int64_t> huge(std::numeric_limits<std::int64_t>::min() / 2,
                                                   std::numeric_limits<std::int64_t>::max() / 2);
  auto operand = [&]() -> std::pair<Rational, mpq_class> {
    std::int64_t n = kind(rng) == 0 ? huge(rng) : small(rng);
    std::int64_t d = kind(rng) == 0 ? huge(rng) : small(rng);
    if (d == 0) d = 1;
    mpq_class q(mpz_class(std::to_string(n)), mpz_class(std::to_string(d)));
    q.canonicalize();
    return {Rational(n, d), q};
  };

  for (int chain = 0; chain < 2000; ++chain) {
    auto [acc, ref] = operand();
    for (int step = 0; step < 12; ++step) {
      auto [x, qx] = operand();
      switch (op_dist(rng)) {
        case 0: acc += x; ref += qx; break;
        case 1: acc -= x; ref -= qx; break;
        case 2: acc *= x; ref *= qx; break;
        case 3:
          if (qx == 0) continue;
          acc /= x;
          ref /= qx;
          break;
      }
      ASSERT_EQ(mpq_string(as_mpq(acc)), mpq_string(ref)) << "chain " << chain << " step " << step;
      ASSERT_EQ(acc.sign(), sgn(ref));
      ASSERT_EQ(acc.fits_int64(), ref.get_num().fits_slong_p() && ref.get_den().fits_slong_p() &&
                                      ref.get_num() != mpz_class(std::to_string(
                                                           std::numeric_limits<std::int64_t>::min())));
    }
    auto [y, qy] = operand();
    ASSERT_EQ(acc < y, ref < qy);
    ASSERT_EQ(acc == y, ref == qy);
  }
}

}  // namespace
}  // namespace simpson
