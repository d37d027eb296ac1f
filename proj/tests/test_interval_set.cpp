#include <gtest/gtest.h>

#include <random>

#include "paramin/interval_set.hpp"

using namespace paramin;

namespace {

ExtendedReal R(long p, long q = 1) { return ExtendedReal(make_rational(p, q)); }

IntervalSet iv(ExtendedReal lo, ExtendedReal hi, bool lc, bool hc) {
  auto i = Interval::make(std::move(lo), std::move(hi), lc, hc);
  return i ? IntervalSet(*i) : IntervalSet();
}

}  // namespace

TEST(Normalize, AdjacentClosedMerge) {
  auto s = IntervalSet::normalize({Interval::closed(R(0), R(1)), Interval::closed(R(1), R(2))});
  EXPECT_EQ(s, IntervalSet(Interval::closed(R(0), R(2))));
}

TEST(Normalize, HalfOpenTouchingMergesButDoubleOpenDoesNot) {
  auto a = IntervalSet::normalize({*Interval::make(R(0), R(1), true, false), Interval::closed(R(1), R(2))});
  EXPECT_EQ(a.pieces().size(), 1u);
  auto b = IntervalSet::normalize({*Interval::make(R(0), R(1), true, false), *Interval::make(R(1), R(2), false, true)});
  EXPECT_EQ(b.pieces().size(), 2u);
  EXPECT_FALSE(b.member(R(1)));
}

TEST(Normalize, AlreadyCanonicalAndEmpty) {
  auto s = iv(R(-1), R(0), true, false);
  EXPECT_EQ(IntervalSet::normalize(s.pieces()), s);
  EXPECT_TRUE(IntervalSet::normalize({}).empty());
}

TEST(Interval, InvariantsEnforced) {
  EXPECT_THROW(Interval::make(R(2), R(1), true, true), DomainError);
  EXPECT_FALSE(Interval::make(R(1), R(1), true, false).has_value());
  auto r = Interval::make(R(0), ExtendedReal::pos_inf(), true, true);
  EXPECT_FALSE(r->hi_closed());
}

TEST(Member, EndpointFlags) {
  auto s = iv(R(-1), R(0), true, false);
  EXPECT_FALSE(s.member(R(0)));
  EXPECT_TRUE(s.member(R(-1)));
  EXPECT_FALSE(IntervalSet().member(R(0)));
}

TEST(Dist, Basics) {
  EXPECT_EQ(dist(R(0), iv(R(-1), R(0), true, false)), R(0));
  EXPECT_EQ(dist(R(3), IntervalSet(Interval::closed(R(0), R(1)))), R(2));
  EXPECT_TRUE(dist(R(0), IntervalSet()).is_pos_inf());
}

TEST(Excess, Basics) {
  EXPECT_EQ(excess(IntervalSet::point(R(2)), IntervalSet::point(R(0))), R(2));
  EXPECT_EQ(excess(IntervalSet(Interval::closed(R(0), R(1))), IntervalSet(Interval::closed(R(0), R(2)))), R(0));
  EXPECT_TRUE(excess(IntervalSet::reals(), IntervalSet(Interval::closed(R(0), R(1)))).is_pos_inf());
  EXPECT_THROW(excess(IntervalSet(), IntervalSet::reals()), DomainError);
  // gap midpoint dominates
  auto b = IntervalSet::normalize({Interval::closed(R(0), R(1)), Interval::closed(R(5), R(6))});
  EXPECT_EQ(excess(IntervalSet(Interval::closed(R(0), R(6))), b), R(2));
}

TEST(Topology, ClosureAndCompactness) {
  EXPECT_EQ(iv(R(-1), R(0), true, false).closure(), IntervalSet(Interval::closed(R(-1), R(0))));
  EXPECT_FALSE(IntervalSet::reals().is_compact());
  EXPECT_TRUE(IntervalSet(Interval::closed(R(-1, 2), R(1, 2))).is_compact());
  EXPECT_TRUE(IntervalSet::reals().is_closed());
}

TEST(Algebra, IntersectUnionComplement) {
  auto a = IntervalSet(Interval::closed(R(0), R(2)));
  auto b = iv(R(1), R(3), false, true);
  EXPECT_EQ(intersect(a, b), iv(R(1), R(2), false, true));
  EXPECT_EQ(union_sets(a, b), IntervalSet(Interval::closed(R(0), R(3))));
  EXPECT_EQ(a.complement().complement(), a);
  EXPECT_EQ(difference(a, b), IntervalSet(Interval::closed(R(0), R(1))));
}

TEST(Accumulation, NestedShrinkingIntervalsCollapseToZero) {
  std::vector<std::pair<ExtendedReal, IntervalSet>> fam;
  for (int k = 1; k <= 20; ++k) {
    ExtendedReal d = R(1, 1L << k);
    fam.emplace_back(d, IntervalSet(Interval::closed(-d, d)));
  }
  auto r = accumulation_set(fam);
  EXPECT_FALSE(r.escaped);
  EXPECT_EQ(r.set, IntervalSet::point(R(0)));
}

TEST(Accumulation, DivergingPointsEscape) {
  std::vector<std::pair<ExtendedReal, IntervalSet>> fam;
  for (int k = 1; k <= 20; ++k) {
    ExtendedReal d = R(1, 1L << k);
    fam.emplace_back(d, IntervalSet::point(ExtendedReal(1) / d));
  }
  auto r = accumulation_set(fam);
  EXPECT_TRUE(r.escaped);
  EXPECT_TRUE(r.set.empty());
}

TEST(Accumulation, ConstantFamilyIsItself) {
  std::vector<std::pair<ExtendedReal, IntervalSet>> fam;
  IntervalSet s(Interval::closed(R(-1, 2), R(1, 2)));
  for (int k = 1; k <= 20; ++k) fam.emplace_back(R(1, 1L << k), s);
  EXPECT_EQ(accumulation_set(fam).set, s);
  EXPECT_THROW(accumulation_set({}), DomainError);
}

TEST(Triangle, ExcessThroughClosedIntermediate) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(-20, 20);
  for (int t = 0; t < 300; ++t) {
    auto mk = [&]() {
      int a = d(rng), b = d(rng);
      if (a > b) std::swap(a, b);
      return IntervalSet(Interval::closed(R(a), R(b)));
    };
    IntervalSet a = mk(), b = mk(), c = mk();
    EXPECT_LE(excess(a, b), excess(a, c) + excess(c, b));
  }
}
