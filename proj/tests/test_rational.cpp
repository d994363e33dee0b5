#include "covtau/rational.hpp"

#include <gtest/gtest.h>

#include "covtau/error.hpp"

namespace covtau {
namespace {

TEST(ParseRational, DecimalsAreExact) {
  EXPECT_EQ(parse_rational("0.2"), make_rational(1, 5));
  EXPECT_EQ(parse_rational(".5"), make_rational(1, 2));
  EXPECT_EQ(parse_rational("2e-3"), make_rational(1, 500));
  EXPECT_EQ(parse_rational("1.25E1"), make_rational(25, 2));
  EXPECT_EQ(parse_rational("-3"), make_rational(-3, 1));
  EXPECT_EQ(parse_rational(" 1/3 "), make_rational(1, 3));
  EXPECT_EQ(parse_rational("010"), make_rational(10, 1));
  EXPECT_EQ(parse_rational("0.30000000000000004"),
            make_rational(30000000000000004, 100000000000000000));
}

TEST(ParseRational, Rejects) {
  for (const char* bad : {"", "abc", "1/0", "1/", "/2", "1.2.3", "e5", "1e", "0x10", "1,5"}) {
    EXPECT_THROW(parse_rational(bad), Error) << bad;
  }
}

TEST(DecimalLabel, TerminatingAndRepeating) {
  EXPECT_EQ(decimal_label(make_rational(1, 5)), "0.2");
  EXPECT_EQ(decimal_label(make_rational(4, 5)), "0.8");
  EXPECT_EQ(decimal_label(make_rational(1, 40)), "0.025");
  EXPECT_EQ(decimal_label(make_rational(1, 1)), "1");
  EXPECT_EQ(decimal_label(make_rational(1, 3)), "1/3");
}

TEST(ToDouble, CorrectlyRoundedForSmallOperands) {
  EXPECT_EQ(to_double(make_rational(1, 3)), 1.0 / 3.0);
  EXPECT_EQ(to_double(make_rational(29, 30)), 29.0 / 30.0);
  const Rational big(BigInt(1) << 200, (BigInt(1) << 201) + 0);
  EXPECT_EQ(to_double(big), 0.5);
}

}  // namespace
}  // namespace covtau
