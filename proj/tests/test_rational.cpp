#include "capkc/rational.hpp"

#include <gtest/gtest.h>

using namespace capkc;

TEST(Rational, ArithmeticStaysCanonical) {
  Rat a = make_rat(1, 3), b = make_rat(5, 6);
  Rat c = a + b;
  EXPECT_EQ(c.get_num(), 7);
  EXPECT_EQ(c.get_den(), 6);
  EXPECT_EQ(make_rat(2, 4), make_rat(1, 2));
  EXPECT_EQ(make_rat(-3, 6), make_rat(-1, 2));
}

TEST(Rational, FloorCeil) {
  EXPECT_EQ(floor_rat(make_rat(7, 2)), 3);
  EXPECT_EQ(ceil_rat(make_rat(7, 2)), 4);
  EXPECT_EQ(floor_rat(make_rat(-7, 2)), -4);
  EXPECT_EQ(ceil_rat(make_rat(-7, 2)), -3);
  EXPECT_EQ(floor_rat(make_rat(4)), 4);
  EXPECT_EQ(ceil_rat(make_rat(4)), 4);
  EXPECT_TRUE(is_integer(make_rat(8, 4)));
  EXPECT_FALSE(is_integer(make_rat(1, 3)));
}

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(*parse_rat("3/4"), make_rat(3, 4));
  EXPECT_EQ(*parse_rat("6/8"), make_rat(3, 4));
  EXPECT_EQ(*parse_rat("-2/6"), make_rat(-1, 3));
  EXPECT_EQ(*parse_rat("17"), make_rat(17));
  EXPECT_EQ(*parse_rat("+5"), make_rat(5));
  EXPECT_EQ(*parse_rat("0"), Rat(0));
  EXPECT_FALSE(parse_rat(""));
  EXPECT_FALSE(parse_rat("1/0"));
  EXPECT_FALSE(parse_rat("1.5"));
  EXPECT_FALSE(parse_rat("a/b"));
  EXPECT_FALSE(parse_rat("1/"));
  EXPECT_FALSE(parse_rat("/2"));
  EXPECT_FALSE(parse_rat("1/-2"));
  EXPECT_FALSE(parse_rat("1/2/3"));

  EXPECT_EQ(rat_str(make_rat(3, 4)), "3/4");
  EXPECT_EQ(rat_str(make_rat(8, 4)), "2");
  EXPECT_EQ(rat_str(make_rat(-1, 3)), "-1/3");
  EXPECT_EQ(rat_str(Rat(0)), "0");
}

TEST(Rational, ParsePrintRoundTrip) {
  for (int num = -12; num <= 12; ++num)
    for (int den = 1; den <= 9; ++den) {
      Rat r = make_rat(num, den);
      EXPECT_EQ(*parse_rat(rat_str(r)), r);
    }
}

TEST(Rational, LcmAndScaling) {
  std::vector<Rat> vals{make_rat(1, 3), make_rat(5, 6), make_rat(2)};
  Int l = lcm_denominators(vals);
  EXPECT_EQ(l, 6);
  EXPECT_EQ(scale_to_int(make_rat(1, 3), l), 2);
  EXPECT_EQ(scale_to_int(make_rat(5, 6), l), 5);
  EXPECT_EQ(scale_to_int(make_rat(2), l), 12);
  EXPECT_EQ(lcm_denominators({}), 1);
  EXPECT_THROW(scale_to_int(make_rat(1, 4), Int(6)), std::invalid_argument);
}
