#include <gtest/gtest.h>

#include <random>

#include "paramin/expr.hpp"
#include "paramin/set_expr.hpp"

using namespace paramin;

namespace {

TaggedPoint Q(long p, long q = 1) { return TaggedPoint(make_rational(p, q)); }
ExtendedReal R(long p, long q = 1) { return ExtendedReal(make_rational(p, q)); }

ExtendedReal ev(const std::string& src, const TaggedPoint& x, const TaggedPoint& y) {
  return eval_expr(*parse_expr(src), x, &y);
}

}  // namespace

TEST(Parse, CorpusCosts) {
  EXPECT_EQ(ev("min(abs(x-y),1)", Q(0), Q(3, 4)), R(3, 4));
  EXPECT_EQ(ev("min(abs(x-y),1)", Q(0), Q(5)), R(1));
  EXPECT_EQ(ev("y*I{x>0}", Q(1, 2), Q(2)), R(2));
  EXPECT_EQ(ev("y*I{x>0}", Q(0), Q(2)), R(0));
  EXPECT_EQ(ev("I{x-y<0}", Q(1, 2), Q(1)), R(1));
}

TEST(Parse, UnicodeOperators) {
  EXPECT_EQ(ev("\xE2\x88\x92x*I{is_rat(x)}", Q(1, 3), Q(0)), R(-1, 3));
  EXPECT_EQ(ev("I{x \xE2\x89\xA0 0}", Q(0), Q(0)), R(0));
  EXPECT_EQ(ev("I{x \xE2\x89\xA4 0}", Q(0), Q(0)), R(1));
}

TEST(Eval, RationalityReadsTheTag) {
  TaggedPoint irr(0, make_rational(1, 2));
  EXPECT_EQ(ev("-x*I{is_rat(x)}", irr, Q(0)), R(0));
  EXPECT_EQ(ev("-x*I{is_rat(x)}", Q(1, 3), Q(0)), R(-1, 3));
}

TEST(Eval, DivisionByZeroIsAnError) {
  EXPECT_THROW(ev("1/x", Q(0), Q(0)), EvalError);
  // untaken branch is never evaluated
  EXPECT_EQ(ev("piecewise(x > 0, 1/x, 0)", Q(0), Q(0)), R(0));
}

TEST(Eval, DecimalsAreExact) {
  EXPECT_EQ(ev("0.1 + 0.2", Q(0), Q(0)), R(3, 10));
  EXPECT_EQ(ev("1e-3", Q(0), Q(0)), R(1, 1000));
  EXPECT_EQ(ev("rat(-2,6)", Q(0), Q(0)), R(-1, 3));
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse_expr("min(x, )");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 8);
  }
  EXPECT_THROW(parse_expr("foo(x)"), ParseError);
  EXPECT_THROW(parse_expr("x +"), ParseError);
}

TEST(Parse, ParenthesizedPredicateAndOperand) {
  EXPECT_EQ(ev("I{(x < 1) and (y > 0)}", Q(0), Q(1)), R(1));
  EXPECT_EQ(ev("I{(x + 1) * 2 < y}", Q(0), Q(3)), R(1));
  EXPECT_EQ(ev("I{not (x < 1) or y == 1}", Q(0), Q(1)), R(1));
}

namespace {

NodePtr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 12);
  std::uniform_int_distribution<int> num(-8, 8), den(1, 4);
  int k = depth <= 0 ? pick(rng) % 3 : pick(rng);
  switch (k) {
    case 0: return make_node(Op::X);
    case 1: return make_node(Op::Y);
    case 2: return make_const(ExtendedReal(make_rational(num(rng), den(rng))));
    case 3: return make_node(Op::Add, {random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    case 4: return make_node(Op::Sub, {random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    case 5: return make_node(Op::Mul, {random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    case 6: return make_node(Op::Neg, {random_expr(rng, depth - 1)});
    case 7: return make_node(Op::Abs, {random_expr(rng, depth - 1)});
    case 8: return make_node(Op::Min, {random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    case 9: return make_node(Op::Max, {random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    case 10:
      return make_node(Op::Indicator,
                       {make_node(Op::Lt, {random_expr(rng, depth - 1), random_expr(rng, depth - 1)})});
    case 11:
      return make_node(Op::Piecewise, {make_node(Op::And, {make_node(Op::Ge, {random_expr(rng, depth - 1), random_expr(rng, depth - 1)}),
                                                           make_node(Op::Not, {make_node(Op::IsRat, {random_expr(rng, depth - 1)})})}),
                                       random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    default: return make_node(Op::Div, {random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
  }
}

}  // namespace

TEST(RoundTrip, RandomTreesDepthSix) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    NodePtr e = random_expr(rng, 6);
    std::string s = print(*e);
    NodePtr back = parse_expr(s);
    ASSERT_TRUE(structurally_equal(*e, *back)) << s << "\n" << print(*back);
  }
}

TEST(Specialize, FoldsXAndKeepsYStructure) {
  NodePtr u = parse_expr("min(abs(x-y),1)");
  YProgram p = specialize(*u, Q(1, 2));
  EXPECT_FALSE(p.constant());
  Trace tr;
  double out;
  p.eval_double(0.75, tr, out);
  EXPECT_DOUBLE_EQ(out, 0.25);
  EXPECT_EQ(p.eval_exact(Q(3, 4), nullptr), R(1, 4));
  YProgram c = specialize(*parse_expr("y*I{x>0}"), Q(0));
  EXPECT_TRUE(c.constant());
}

TEST(Specialize, FrozenLimitAtOpenEnd) {
  // |x - y| at x = 1/2 on y < 0: frozen branch gives the one-sided limit at 0
  YProgram p = specialize(*parse_expr("abs(x-y)"), Q(1, 2));
  Trace tr;
  p.eval_exact(Q(-1, 2), &tr);
  EXPECT_EQ(p.eval_frozen(Q(0), tr), R(1, 2));
  // a pole approached from a frozen side gives a signed infinity
  YProgram q = specialize(*parse_expr("1/y"), Q(0));
  q.eval_exact(Q(1, 4), &tr);
  EXPECT_TRUE(q.eval_frozen(Q(0), tr).is_pos_inf());
}

TEST(SetExpr, CorpusMappings) {
  auto s46 = parse_set("if x > 0 then {1/x} else {0}");
  EXPECT_EQ(eval_set(*s46, Q(1, 4)), IntervalSet::point(R(4)));
  EXPECT_EQ(eval_set(*s46, Q(0)), IntervalSet::point(R(0)));
  auto s43 = parse_set("[-1, 0)");
  EXPECT_EQ(eval_set(*s43, Q(1, 2)), IntervalSet(*Interval::make(R(-1), R(0), true, false)));
  auto s43b = parse_set("{0, -I{x == 0}}");
  EXPECT_EQ(eval_set(*s43b, Q(0)), IntervalSet::normalize({Interval::point(R(-1)), Interval::point(R(0))}));
  EXPECT_EQ(eval_set(*s43b, Q(1, 3)), IntervalSet::point(R(0)));
}

TEST(SetExpr, RaysUnionsAndRoundTrip) {
  auto s = parse_set("union(ray(x, +inf, open), [-2, -1], {x - 5})");
  IntervalSet v = eval_set(*s, Q(0));
  EXPECT_EQ(v.pieces().size(), 3u);
  EXPECT_FALSE(v.member(R(0)));
  EXPECT_TRUE(v.member(R(100)));
  auto back = parse_set(print_set(*s));
  EXPECT_EQ(eval_set(*back, Q(1, 3)), eval_set(*s, Q(1, 3)));
  EXPECT_THROW(parse_set("[0, y]"), ParseError);
  EXPECT_THROW(eval_set(*parse_set("[1, 0]"), Q(0)), EvalError);
}
