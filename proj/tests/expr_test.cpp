#include <gtest/gtest.h>

#include <random>

#include "tissuenet/dsl.hpp"
#include "tissuenet/expr.hpp"

using namespace tissuenet;

namespace {

class FixedLevels : public EvalContext {
 public:
  explicit FixedLevels(std::vector<std::int64_t> v) : v_(std::move(v)) {}
  std::int64_t level(std::size_t g) const override { return v_.at(g); }
  std::int64_t sigma(std::size_t s) const override { return 10 + static_cast<std::int64_t>(s); }

 private:
  std::vector<std::int64_t> v_;
};

const std::vector<std::string> kComponents{"A", "B", "C"};
const std::vector<std::string> kSigmas{"sA"};

Expr parse_ok(const std::string& text) {
  auto r = parse_expression(text);
  EXPECT_TRUE(r.expr.has_value()) << text;
  return r.expr.value_or(Expr::constant(0));
}

std::int64_t eval_text(const std::string& text, std::vector<std::int64_t> levels = {0, 0, 0}) {
  std::vector<ExprIssue> issues;
  Expr e = resolve(parse_ok(text), {kComponents, kSigmas}, issues);
  EXPECT_TRUE(issues.empty()) << text;
  return evaluate(e, FixedLevels(std::move(levels)));
}

Expr random_expr(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
  switch (pick(rng)) {
    case 0: return Expr::constant(std::uniform_int_distribution<int>(-5, 5)(rng));
    case 1: return Expr::name(kComponents[std::uniform_int_distribution<std::size_t>(0, 2)(rng)]);
    case 2:
      return Expr::unary(std::uniform_int_distribution<int>(0, 1)(rng) ? UnaryOp::negate
                                                                       : UnaryOp::logical_not,
                         random_expr(rng, depth - 1));
    case 3: {
      auto n = std::uniform_int_distribution<int>(1, 3)(rng);
      std::vector<Expr> args;
      for (int k = 0; k < n; ++k) args.push_back(random_expr(rng, depth - 1));
      return Expr::call(std::uniform_int_distribution<int>(0, 1)(rng) ? Builtin::min : Builtin::max,
                        std::move(args));
    }
    default: {
      auto op = static_cast<BinaryOp>(std::uniform_int_distribution<int>(0, 10)(rng));
      return Expr::binary(op, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    }
  }
}

}  // namespace

TEST(Expr, Arithmetic) {
  EXPECT_EQ(eval_text("1 + 2 * 3"), 7);
  EXPECT_EQ(eval_text("(1 + 2) * 3"), 9);
  EXPECT_EQ(eval_text("10 - 3 - 2"), 5);
  EXPECT_EQ(eval_text("-2 * 3"), -6);
  EXPECT_EQ(eval_text("- (2 + 1)"), -3);
  EXPECT_EQ(eval_text("1 - C", {0, 0, 1}), 0);
}

TEST(Expr, ComparisonsAndLogic) {
  EXPECT_EQ(eval_text("1 < 2 == 1"), 1);
  EXPECT_EQ(eval_text("A == 0 and B == 0", {0, 0, 0}), 1);
  EXPECT_EQ(eval_text("A == 0 && B == 1", {0, 0, 0}), 0);
  EXPECT_EQ(eval_text("A or B", {0, 3, 0}), 1);
  EXPECT_EQ(eval_text("not A", {2, 0, 0}), 0);
  EXPECT_EQ(eval_text("!A", {0, 0, 0}), 1);
  EXPECT_EQ(eval_text("1 or 0 and 0"), 1);
}

TEST(Expr, Builtins) {
  EXPECT_EQ(eval_text("max(0, A - sA)", {1, 0, 0}), 0);
  EXPECT_EQ(eval_text("max(0, sA - A)", {1, 0, 0}), 9);
  EXPECT_EQ(eval_text("min(A, B, C)", {3, 1, 2}), 1);
}

TEST(Expr, ResolveReportsUnknownNames) {
  std::vector<ExprIssue> issues;
  resolve(parse_ok("A + D"), {kComponents, kSigmas}, issues);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].pos.column, 5);
}

TEST(Expr, BundleQueriesNeedTheirScope) {
  std::vector<ExprIssue> issues;
  resolve(parse_ok("A@0 == 1"), {kComponents, kSigmas}, issues);
  EXPECT_FALSE(issues.empty());
  issues.clear();
  resolve(parse_ok("A@0 == 1 and alive(2) and count() > 1"),
          {kComponents, {}, true, false}, issues);
  EXPECT_TRUE(issues.empty());
  resolve(parse_ok("A == 1"), {kComponents, {}, true, false}, issues);
  EXPECT_FALSE(issues.empty());
}

TEST(Expr, ArityIsChecked) {
  std::vector<ExprIssue> issues;
  resolve(parse_ok("max()"), {kComponents, kSigmas}, issues);
  EXPECT_FALSE(issues.empty());
}

TEST(Expr, NegativeLiteralsRoundTrip) {
  EXPECT_EQ(to_string(parse_ok("-3")), "-3");
  EXPECT_EQ(to_string(parse_ok("-(3)")), "-(3)");
  EXPECT_EQ(to_string(parse_ok("2 - -3")), "2 - -3");
  EXPECT_EQ(parse_ok(to_string(parse_ok("- -3"))), parse_ok("- -3"));
}

TEST(Expr, PrinterOutputReparsesToTheSameTree) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    Expr e = random_expr(rng, 4);
    std::string text = to_string(e);
    auto back = parse_expression(text);
    ASSERT_TRUE(back.expr.has_value()) << text;
    ASSERT_EQ(*back.expr, e) << text;
  }
}

TEST(Expr, PrinterPreservesValue) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> level(0, 3);
  for (int trial = 0; trial < 500; ++trial) {
    Expr e = random_expr(rng, 4);
    std::vector<std::int64_t> levels{level(rng), level(rng), level(rng)};
    std::vector<ExprIssue> issues;
    auto a = resolve(e, {kComponents, kSigmas}, issues);
    auto b = resolve(*parse_expression(to_string(e)).expr, {kComponents, kSigmas}, issues);
    ASSERT_TRUE(issues.empty());
    EXPECT_EQ(evaluate(a, FixedLevels(levels)), evaluate(b, FixedLevels(levels))) << to_string(e);
  }
}

TEST(Expr, SyntaxErrorsCarryPositions) {
  auto r = parse_expression("1 + * 2");
  EXPECT_FALSE(r.expr.has_value());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].pos.line, 1);
  EXPECT_EQ(r.diagnostics[0].pos.column, 5);
}
