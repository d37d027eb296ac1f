#include <gtest/gtest.h>

#include "paramin/checks.hpp"

using namespace paramin;

namespace {

TaggedPoint Q(long p, long q = 1) { return TaggedPoint(make_rational(p, q)); }
ExtendedReal R(long p, long q = 1) { return ExtendedReal(make_rational(p, q)); }

Problem load(const std::string& name, const std::string& xd, const std::string& yd, const std::string& u,
             const std::string& phi, const std::string& extra = "") {
  return load_problem_text("name: " + name + "\nx_domain: \"" + xd + "\"\ny_domain: \"" + yd + "\"\nu: \"" + u +
                           "\"\nphi: \"" + phi + "\"\n" + extra);
}

void expect_replays(const Problem& p, const Verdict& v) {
  ASSERT_TRUE(v.fails()) << v.id;
  ASSERT_TRUE(v.witness.has_value()) << v.id;
  auto r = replay_witness(p, *v.witness);
  EXPECT_TRUE(r.reproduced) << v.id << ": " << r.detail;
}

Problem clip() {
  return load("clip", "reals", "reals", "min(abs(x-y), 1)", "reals", "window: \"[-2, 2]\"\n");
}
Problem reciprocal() {
  return load("reciprocal", "[0, 1]", "[0, +inf)", "0", "if x > 0 then {1/x} else {0}");
}
Problem jump() { return load("jump", "[-1, 1]", "[-1, 1]", "I{x != 0}", "{x}"); }
Problem two_point() { return load("two", "[0, 1]", "[-1, 0]", "abs(x - y)", "{0, -I{x = 0}}"); }

}  // namespace

TEST(Scalar, LscUscOfStep) {
  Problem p = jump();
  ProblemModel m(p);
  EXPECT_TRUE(check_lsc_at(m, "I{x != 0}", Q(0)).holds());
  Verdict usc = check_usc_at(m, "I{x != 0}", Q(0));
  expect_replays(p, usc);
  // usc of f matches lsc of -f
  EXPECT_EQ(check_lsc_at(m, "-I{x != 0}", Q(0)).status, usc.status);
}

TEST(Scalar, RationalDipAtIrrationalPoint) {
  Problem p = jump();
  ProblemModel m(p);
  TaggedPoint a(0, make_rational(1, 2));  // sqrt2/2
  Verdict v = check_lsc_at(m, "-x*I{is_rat(x)}", a);
  expect_replays(p, v);
  EXPECT_NEAR(v.margin, std::sqrt(2.0) / 2, 1e-3);
  EXPECT_TRUE(check_usc_at(m, "-x*I{is_rat(x)}", a).holds());
}

TEST(Scalar, ContinuousFunctionHoldsBothWays) {
  Problem p = jump();
  ProblemModel m(p);
  EXPECT_TRUE(check_lsc_at(m, "x*x - 3*x", Q(1, 3)).holds());
  EXPECT_TRUE(check_usc_at(m, "x*x - 3*x", Q(1, 3)).holds());
}

TEST(Value, JumpIsLscNotUsc) {
  Problem p = jump();
  ProblemModel m(p);
  EXPECT_TRUE(check_v_lsc(m, Q(0)).holds());
  expect_replays(p, check_v_usc(m, Q(0)));
}

TEST(Graph, UscOfIndicatorFailsAtOrigin) {
  Problem p = jump();
  ProblemModel m(p);
  Verdict v = check_u_graph_at(m, Q(0), R(0), false);
  expect_replays(p, v);
  EXPECT_TRUE(check_u_graph_at(m, Q(0), R(0), true).holds());
}

TEST(Graph, ProductUscFailsOnDiagonalStep) {
  Problem p = load("step", "[0, 1]", "[0, 2]", "I{x-y<0}", "[0, 2]");
  ProblemModel m(p);
  Verdict v = check_u_product_at(m, Q(1, 2), R(1, 2), false);
  expect_replays(p, v);
  EXPECT_TRUE(check_u_product_at(m, Q(1, 2), R(1, 2), true).holds());
  EXPECT_TRUE(check_kn_at(m, Q(1, 2)).holds());
}

TEST(Map, ReciprocalGraphIsClosedButNotUsc) {
  Problem p = reciprocal();
  ProblemModel m(p);
  EXPECT_TRUE(check_closed_graph(m, Q(0)).holds());
  expect_replays(p, check_map_usc_at(m, Q(0)));
  expect_replays(p, check_argmin_usc_at(m, Q(0)));
  expect_replays(p, check_condition_iv(m, Q(0)));
  Verdict kn = check_kn_at(m, Q(0));
  expect_replays(p, kn);
  EXPECT_EQ(kn.witness->kind, "escaping-sequence");
}

TEST(Map, TwoPointMappingIsNotLsc) {
  Problem p = two_point();
  ProblemModel m(p);
  expect_replays(p, check_map_lsc_at(m, Q(0)));
  EXPECT_TRUE(check_map_usc_at(m, Q(0)).holds());
  EXPECT_TRUE(check_map_lsc_at(m, Q(1, 2)).holds());
}

TEST(Map, OpenIntervalGraphIsNotClosed) {
  Problem p = load("open", "[0, 1]", "[-1, 0]", "abs(x - y)", "[-1, 0)");
  ProblemModel m(p);
  expect_replays(p, check_closed_graph(m, Q(0)));
  EXPECT_TRUE(check_map_lsc_at(m, Q(0)).holds());
}

TEST(Map, EmptyFeasibleSetIsADomainError) {
  Problem p = load("empty", "[0, 1]", "[0, 1]", "y", "if x > 0 then [0, 1] else empty", "nonempty_required: false\n");
  ProblemModel m(p);
  EXPECT_THROW(check_map_lsc_at(m, Q(0)), DomainError);
  EXPECT_EQ(check_map_usc_at(m, Q(0)).status, Status::Unknown);
  EXPECT_TRUE(check_map_lsc_at(m, Q(1, 2)).holds());
}

TEST(Levels, ClipConditionIIIAndCompactness) {
  Problem p = clip();
  ProblemModel m(p);
  auto c = check_condition_iii(m, Q(0), R(1, 2));
  ASSERT_TRUE(c.verdict.holds()) << c.verdict.note;
  ASSERT_TRUE(c.C.has_value());
  EXPECT_EQ(*c.C, IntervalSet(Interval::closed(R(-1), R(1))));
  EXPECT_TRUE(check_inf_compact(m, Q(0), {R(1, 2)}).holds());
  expect_replays(p, check_inf_compact(m, Q(0), {R(1)}));
  Verdict kn = check_kn_at(m, Q(0));
  expect_replays(p, kn);
  EXPECT_TRUE(check_condition_iv(m, Q(0)).holds());
  EXPECT_TRUE(check_argmin_usc_at(m, Q(0)).holds());
}

TEST(Levels, ConditionIIIFailsWhenLevelsEmpty) {
  Problem p = jump();
  ProblemModel m(p);
  auto c = check_condition_iii(m, Q(0), R(1, 2));
  expect_replays(p, c.verdict);
  EXPECT_FALSE(c.C.has_value());
}

TEST(Levels, ConditionIIIFailsWhenLevelsEscape) {
  // each level set {1/x_n} is compact, but no single compact set holds them all
  Problem p = reciprocal();
  ProblemModel m(p);
  for (long den : {1L, 4L}) {
    auto c = check_condition_iii(m, Q(0), R(den, 1));
    expect_replays(p, c.verdict);
    EXPECT_EQ(c.verdict.witness->kind, "escaping-sequence");
  }
}

TEST(Levels, ArgminCompactness) {
  Problem p = load("open", "[0, 1]", "[-1, 0]", "abs(x - y)", "[-1, 0)");
  ProblemModel m(p);
  expect_replays(p, check_argmin_compact(m, Q(0)));
  Problem s = load("step", "[0, 1]", "[0, 2]", "I{x-y<0}", "[0, 2]");
  ProblemModel ms(s);
  EXPECT_TRUE(check_argmin_compact(ms, Q(1, 2)).holds());
}

TEST(Truncated, KnHoldsOnTruncatedJump) {
  Problem p = jump();
  ProblemModel base(p);
  TruncatedModel tm(base, truncate(base, R(1, 2), Q(0)));
  EXPECT_TRUE(check_kn_at(tm, Q(0)).holds());
  // the constant truncation is continuous even though the original is not
  EXPECT_TRUE(check_v_usc(tm, Q(0)).holds());
}

TEST(Truncated, WitnessesRecordTheModel) {
  Problem p = clip();
  ProblemModel base(p);
  TruncatedModel tm(base, truncate(base, R(2), Q(0)));
  Verdict v = check_inf_compact(tm, Q(0), {R(1)});
  ASSERT_TRUE(v.fails());
  EXPECT_EQ(v.witness->args.at("model"), "truncated");
  expect_replays(p, v);
}

TEST(KCompact, ClipIsNotKInfCompact) {
  Problem p = clip();
  ProblemModel m(p);
  expect_replays(p, check_k_inf_compact(m, IntervalSet(Interval::closed(R(0), R(1)))));
  Problem a = load("abs", "reals", "reals", "abs(y)", "reals", "window: \"[-2, 2]\"\n");
  ProblemModel ma(a);
  EXPECT_TRUE(check_k_inf_compact(ma, IntervalSet(Interval::closed(R(0), R(1)))).holds());
}

TEST(KCompact, ConstantCompactMapping) {
  Problem p = load("quad", "[-1, 1]", "[-4, 4]", "(y-x)*(y-x)", "[-4, 4]");
  ProblemModel m(p);
  EXPECT_TRUE(check_k_inf_compact(m, IntervalSet(Interval::closed(R(-1, 2), R(1, 2)))).holds());
  EXPECT_THROW(check_k_inf_compact(m, IntervalSet(*Interval::make(R(0), R(1), true, false))), DomainError);
}

TEST(Replay, TamperedWitnessIsRejected) {
  Problem p = reciprocal();
  ProblemModel m(p);
  Verdict v = check_map_usc_at(m, Q(0));
  ASSERT_TRUE(v.fails());
  Witness w = *v.witness;
  w.margin += 1.0;
  EXPECT_FALSE(replay_witness(p, w).reproduced);
  Witness z = *v.witness;
  for (auto& t : z.terms) t.z = Q(0);
  EXPECT_FALSE(replay_witness(p, z).reproduced);
}
