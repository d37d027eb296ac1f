#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "paramin/minimizer.hpp"

using namespace paramin;

namespace {

TaggedPoint Q(long p, long q = 1) { return TaggedPoint(make_rational(p, q)); }
ExtendedReal R(long p, long q = 1) { return ExtendedReal(make_rational(p, q)); }

Problem load(const std::string& name, const std::string& xd, const std::string& yd, const std::string& u,
             const std::string& phi, const std::string& extra = "") {
  return load_problem_text("name: " + name + "\nx_domain: \"" + xd + "\"\ny_domain: \"" + yd + "\"\nu: \"" + u +
                           "\"\nphi: \"" + phi + "\"\n" + extra);
}

IntervalSet closed(ExtendedReal a, ExtendedReal b) { return IntervalSet(Interval::closed(a, b)); }

}  // namespace

TEST(Value, TruncatedDistance) {
  Problem p = load("clip", "reals", "reals", "min(abs(x-y),1)", "reals", "window: \"[-2, 2]\"\n");
  auto r = value(p, Q(0));
  EXPECT_EQ(r.value, R(0));
  EXPECT_TRUE(r.attained);
  EXPECT_EQ(r.argmin, IntervalSet::point(R(0)));
  EXPECT_EQ(level_set(p, Q(0), R(1)), IntervalSet::reals());
  EXPECT_EQ(level_set(p, Q(0), R(1, 2)), closed(R(-1, 2), R(1, 2)));
  EXPECT_EQ(level_set(p, Q(1, 3), R(1, 2)), closed(R(-1, 6), R(5, 6)));
}

TEST(Value, OpenEndIsNotAttained) {
  Problem p = load("open", "[0, 1]", "[-1, 0]", "abs(x-y)", "[-1, 0)");
  auto r = value(p, Q(1, 2));
  EXPECT_EQ(r.value, R(1, 2));
  EXPECT_FALSE(r.attained);
  EXPECT_TRUE(r.argmin.empty());
  auto z = value(p, Q(0));
  EXPECT_EQ(z.value, R(0));
  EXPECT_FALSE(z.attained);
}

TEST(Value, UnboundedLinearCost) {
  Problem p = load("ray", "[0, 1]", "[0, +inf)", "y*I{x>0}", "[2, +inf)");
  auto r = value(p, Q(1, 2));
  EXPECT_EQ(r.value, R(2));
  EXPECT_TRUE(r.attained);
  EXPECT_EQ(r.argmin, IntervalSet::point(R(2)));
  auto z = value(p, Q(0));
  EXPECT_EQ(z.value, R(0));
  EXPECT_EQ(z.argmin, p.feasible(Q(0)));
}

TEST(Value, StepCostSolutionSet) {
  Problem p = load("step", "[0, 1]", "[0, 2]", "I{x-y<0}", "[0, 2]");
  auto r = value(p, Q(1, 2));
  EXPECT_EQ(r.value, R(0));
  EXPECT_EQ(r.argmin, closed(R(0), R(1, 2)));
}

TEST(Value, EmptyFeasibleSetIsPlusInfinity) {
  Problem p = load("empty", "[0, 1]", "[0, 1]", "y", "if x > 0 then [0, 1] else empty", "nonempty_required: false\n");
  auto r = value(p, Q(0));
  EXPECT_TRUE(r.value.is_pos_inf());
  EXPECT_FALSE(r.attained);
  EXPECT_THROW(value(p, Q(2)), DomainError);
}

TEST(Value, QuadraticInteriorMinimum) {
  Problem p = load("quad", "[-1, 1]", "[-4, 4]", "(y-x)*(y-x) + 1", "[-4, 4]");
  auto r = value(p, Q(1, 3));
  EXPECT_NEAR(r.value.numeric(), 1.0, 1e-9);
  EXPECT_TRUE(r.attained);
  ASSERT_FALSE(r.argmin.empty());
  EXPECT_NEAR(r.argmin.inf().numeric(), 1.0 / 3, 1e-4);
}

TEST(Truncation, IdentitiesAtValuePlusOne) {
  Problem p = load("clip", "reals", "reals", "min(abs(x-y),1)", "reals", "window: \"[-2, 2]\"\n");
  ProblemModel m(p);
  ExtendedReal lambda = m.slice(Q(0)).value() + R(1);
  TruncatedModel tm(m, truncate(m, lambda, Q(0)));
  for (auto z : {Q(0), Q(1, 2), Q(-3, 2)}) {
    auto tv = truncated_value(tm, z);
    EXPECT_EQ(tv.value, m.slice(z).value());
    EXPECT_EQ(tv.argmin, m.slice(z).argmin());
  }
}

TEST(Truncation, EmptyLevelFallsBackToAnchor) {
  // u = I{x != 0}: level at 1/2 is empty away from 0, so the truncation is constant
  Problem p = load("ind", "[-1, 1]", "[-1, 1]", "I{x != 0}", "{x}");
  ProblemModel m(p);
  TruncatedModel tm(m, truncate(m, R(1, 2), Q(0)));
  EXPECT_EQ(tm.feasible(Q(1, 4)), IntervalSet::point(R(0)));
  EXPECT_EQ(truncated_value(tm, Q(1, 4)).value, R(0));
  TruncatedModel low(m, truncate(m, R(-1), Q(0)));
  EXPECT_THROW(truncated_value(low, Q(0)), DomainError);
}
