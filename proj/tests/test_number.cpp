#include <gtest/gtest.h>

#include "paramin/number.hpp"

using namespace paramin;

TEST(TaggedPoint, RationalityFollowsTheMarker) {
  TaggedPoint third(make_rational(1, 3));
  EXPECT_TRUE(third.is_rational());
  TaggedPoint irr(0, make_rational(1, 2));
  EXPECT_FALSE(irr.is_rational());
  EXPECT_NEAR(irr.numeric(), std::sqrt(2.0) / 2, 1e-15);
}

TEST(TaggedPoint, ExactSignUnderCancellation) {
  // 99/70 is a convergent of sqrt2: 99/70 - sqrt2 > 0 by about 7.2e-5
  TaggedPoint d = TaggedPoint(make_rational(99, 70)) - TaggedPoint::sqrt2();
  EXPECT_EQ(d.sign(), 1);
  // 665857/470832 - sqrt2 is about 1.6e-12
  TaggedPoint e = TaggedPoint(make_rational(665857, 470832)) - TaggedPoint::sqrt2();
  EXPECT_EQ(e.sign(), 1);
  EXPECT_NEAR(e.numeric(), 665857.0 / 470832.0 - std::sqrt(2.0), 1e-15);
  EXPECT_GT(e.numeric(), 0.0);
}

TEST(TaggedPoint, DivisionByConjugate) {
  TaggedPoint a(1, 1);  // 1 + sqrt2
  TaggedPoint inv = TaggedPoint(1) / a;
  EXPECT_EQ(inv, TaggedPoint(-1, 1));  // sqrt2 - 1
  EXPECT_EQ(a * inv, TaggedPoint(1));
  EXPECT_THROW(a / TaggedPoint(0), DomainError);
}

TEST(TaggedPoint, StringForm) {
  EXPECT_EQ(TaggedPoint(make_rational(-1, 3)).str(), "-1/3");
  EXPECT_EQ(TaggedPoint(0, make_rational(1, 2)).str(), "1/2*sqrt2");
  EXPECT_EQ(TaggedPoint(1, -1).str(), "1-sqrt2");
}

TEST(ExtendedReal, TotalOrder) {
  ExtendedReal ninf = ExtendedReal::neg_inf(), pinf = ExtendedReal::pos_inf();
  EXPECT_LT(ninf, ExtendedReal(-1000000));
  EXPECT_LT(ExtendedReal(1000000), pinf);
  EXPECT_EQ(ninf, ninf);
  EXPECT_LT(ExtendedReal(make_rational(1, 3)), ExtendedReal(0.3333333333333334));
  EXPECT_GT(ExtendedReal(make_rational(1, 3)), ExtendedReal(0.3333333333333333));
}

TEST(ExtendedReal, InfinityConventions) {
  ExtendedReal pinf = ExtendedReal::pos_inf(), ninf = ExtendedReal::neg_inf();
  EXPECT_THROW(pinf + ninf, DomainError);
  EXPECT_TRUE((pinf + ExtendedReal(3)).is_pos_inf());
  EXPECT_EQ(ExtendedReal(0) * pinf, ExtendedReal(0));
  EXPECT_TRUE((ExtendedReal(-2) * pinf).is_neg_inf());
  EXPECT_EQ(ExtendedReal(5) / pinf, ExtendedReal(0));
  EXPECT_THROW(ExtendedReal(1) / ExtendedReal(0), DomainError);
  EXPECT_THROW(ExtendedReal(std::nan("")), DomainError);
}

TEST(ExtendedReal, ExactnessIsContagiousOnlyBothWays) {
  ExtendedReal a(make_rational(1, 10)), b(make_rational(2, 10));
  ExtendedReal s = a + b;
  ASSERT_TRUE(s.is_exact());
  EXPECT_EQ(*s.exact(), TaggedPoint(make_rational(3, 10)));
  ExtendedReal f = a + ExtendedReal(0.2);
  EXPECT_FALSE(f.is_exact());
}

TEST(Rational, SimplestBetween) {
  EXPECT_EQ(simplest_between(make_rational(3, 10), make_rational(4, 10)), make_rational(1, 3));
  EXPECT_EQ(simplest_between(make_rational(-1, 2), make_rational(1, 2)), Rational(0));
  EXPECT_EQ(simplest_between(make_rational(-7, 10), make_rational(-6, 10)), make_rational(-2, 3));
  EXPECT_EQ(simplest_between(Rational(2), Rational(2)), Rational(2));
}

TEST(Rational, CorrectlyRoundedConversion) {
  EXPECT_EQ(to_double(make_rational(1, 10)), 0.1);
  EXPECT_EQ(to_double(make_rational(1, 3)), 1.0 / 3.0);
  EXPECT_EQ(round_significant(0.1 + 0.2), 0.3);
}
