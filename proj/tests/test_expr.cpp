#include <doctest.h>

#include <cmath>
#include <numbers>

#include "defgeo/errors.hpp"
#include "defgeo/expr.hpp"
#include "support/random_expr.hpp"

using namespace defgeo;

namespace {

const std::vector<std::string> kXY = {"x", "y"};
const std::vector<std::string> kSphere = {"theta", "phi"};

double at(const std::string& src, const std::vector<std::string>& names, std::vector<double> p) {
  return parse(src, names).eval(p);
}

}  // namespace

TEST_CASE("precedence: x + y*y is Add(x, Mul(y, y))") {
  const Expr e = parse("x + y*y", kXY);
  REQUIRE(e.kind() == Expr::Kind::Binary);
  CHECK(e.binary_op() == BinaryOp::Add);
  CHECK(e.lhs().kind() == Expr::Kind::Variable);
  CHECK(e.lhs().variable_index() == 0);
  const Expr rhs = e.rhs();
  REQUIRE(rhs.kind() == Expr::Kind::Binary);
  CHECK(rhs.binary_op() == BinaryOp::Mul);
  CHECK(rhs.lhs().variable_index() == 1);
  CHECK(rhs.rhs().variable_index() == 1);
}

TEST_CASE("function application tree") {
  const Expr e = parse("exp(phi)*cos(theta)", kSphere);
  REQUIRE(e.binary_op() == BinaryOp::Mul);
  CHECK(e.lhs().func() == Func::Exp);
  CHECK(e.lhs().operand().variable_index() == 1);
  CHECK(e.rhs().func() == Func::Cos);
  CHECK(e.rhs().operand().variable_index() == 0);
}

TEST_CASE("power is right associative and binds tighter than unary minus") {
  // 2^(3^2) = 512, whereas (2^3)^2 would be 64.
  CHECK(at("2^3^2", kXY, {0, 0}) == 512.0);
  const Expr e = parse("2^3^2", kXY);
  CHECK(e.binary_op() == BinaryOp::Pow);
  CHECK(e.rhs().binary_op() == BinaryOp::Pow);

  const Expr neg = parse("-x^2", kXY);
  REQUIRE(neg.kind() == Expr::Kind::Negate);
  CHECK(neg.operand().binary_op() == BinaryOp::Pow);
  CHECK(at("-x^2", kXY, {3, 0}) == -9.0);
  CHECK(at("2^-1", kXY, {0, 0}) == 0.5);
  CHECK(at("x - y - 1", kXY, {5, 2}) == 2.0);
  CHECK(at("x / y / 2", kXY, {8, 2}) == 2.0);
  CHECK(at("(x + y)*2", kXY, {1, 2}) == 6.0);
}

TEST_CASE("evaluation examples") {
  CHECK(std::abs(at("cot(theta)", kSphere, {std::numbers::pi / 2, 0})) < 1e-15);
  CHECK(at("exp(0)", kXY, {0.3, -2}) == 1.0);
  CHECK(at("0.3*x + 0.1*y^2", kXY, {1, 2}) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(at("1.5e2 + .5 + 2E-1", kXY, {0, 0}) == doctest::Approx(150.7));
  CHECK(at("pi", kXY, {0, 0}) == std::numbers::pi);
  CHECK(at("sinh(0) + cosh(0) + abs(-2) + sqrt(4) + log(1) + tan(0)", kXY, {0, 0}) == 5.0);
}

TEST_CASE("evaluation is pure") {
  const Expr e = parse("sin(x)*exp(y) / (1 + x^2)", kXY);
  const std::vector<double> p = {0.37, -1.2};
  const double a = e.eval(p);
  for (int i = 0; i < 10; ++i) CHECK(e.eval(p) == a);
}

TEST_CASE("domain errors carry point and sub-expression") {
  CHECK_THROWS_AS(at("log(x)", kXY, {-1, 0}), DomainError);
  CHECK_THROWS_AS(at("sqrt(x)", kXY, {-1, 0}), DomainError);
  CHECK_THROWS_AS(at("1/x", kXY, {0, 0}), DomainError);
  CHECK_THROWS_AS(at("cot(x)", kXY, {0, 0}), DomainError);
  CHECK_THROWS_AS(at("cot(x)", kXY, {std::numbers::pi, 0}), DomainError);
  CHECK_THROWS_AS(at("x^0.5", kXY, {-2, 0}), DomainError);
  try {
    at("y + log(x - 1)", kXY, {0.5, 2});
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.subexpression() == "log(x - 1)");
    CHECK(e.point() == "(0.5, 2)");
  }
}

TEST_CASE("parse errors report byte offsets and unknown identifiers") {
  try {
    parse("x + * y", kXY);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
  try {
    parse("x + z", kXY);
    FAIL("expected unknown identifier");
  } catch (const UnknownIdentifierError& e) {
    CHECK(e.name() == "z");
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse("", kXY), ParseError);
  CHECK_THROWS_AS(parse("   ", kXY), ParseError);
  CHECK_THROWS_AS(parse("(x + y", kXY), ParseError);
  CHECK_THROWS_AS(parse("x y", kXY), ParseError);
  CHECK_THROWS_AS(parse("sin x", kXY), ParseError);
  CHECK_THROWS_AS(parse("x $ y", kXY), ParseError);
  CHECK_THROWS_AS(parse("x", {"x", "x"}), std::invalid_argument);
  CHECK_THROWS_AS(parse("sin", {"sin"}), std::invalid_argument);
}

TEST_CASE("symbolic partial examples") {
  const Expr xy = parse("x*y", kXY);
  const Expr dx = symbolic_partial(xy, "x");
  CHECK(dx.eval(std::vector<double>{0.3, 1.7}) == 1.7);
  CHECK(dx.eval(std::vector<double>{-4, -2.5}) == -2.5);

  const Expr c = parse("7.5", kXY);
  CHECK(symbolic_partial(c, "x").eval(std::vector<double>{1, 2}) == 0.0);

  // Oracle: central difference of cot at pi/4 with step 1e-5.
  const Expr cot = parse("cot(theta)", kSphere);
  const std::vector<double> p = {std::numbers::pi / 4, 0.0};
  const double oracle = testing::central_difference(cot, p, 0, 1e-5);
  const double exact = symbolic_partial(cot, "theta").eval(p);
  CHECK(oracle == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(exact == doctest::Approx(-2.0).epsilon(1e-14));

  CHECK_THROWS_AS(symbolic_partial(cot, "r"), std::invalid_argument);
}

TEST_CASE("variable exponents over a vanishing base") {
  auto d = [](const char* src, const char* var, std::vector<double> p) {
    return symbolic_partial(parse(src, kXY), var).eval(p);
  };
  // identically zero, so every partial is zero
  CHECK(d("sinh(y - y)^(x + 2)", "x", {1.1, 0.7}) == 0.0);
  CHECK(d("(x - 1)^y", "y", {1.0, 2.0}) == 0.0);
  // 2 u u' at u = 0
  CHECK(d("(x - 1)^y", "x", {1.0, 2.0}) == 0.0);
  CHECK(d("(x - 1)^y", "x", {1.0, 1.0}) == 1.0);
  // y u^(y-1) is unbounded for y < 1
  CHECK_THROWS_AS(d("(x - 1)^y", "x", {1.0, 0.5}), DomainError);
  // away from zero the usual rule applies
  CHECK(std::abs(d("x^y", "y", {2.0, 3.0}) - 8.0 * std::log(2.0)) <= 1e-14);
  CHECK(std::abs(d("x^y", "x", {2.0, 3.0}) - 12.0) <= 1e-14);
}

TEST_CASE("printing round-trips through the parser") {
  for (const char* src : {"x + y*y", "-x^2", "(-x)^2", "2^3^2", "(2^3)^2", "x - (y - 1)", "x/(y/2)",
                          "-(x + y)", "--x", "x*-y", "exp(phi)", "1e-05*x", "0.1 + x^-2", "abs(-x)/(1 + y)^x"}) {
    const std::vector<std::string> names = {"x", "y", "phi"};
    const Expr a = parse(src, names);
    const Expr b = parse(a.to_string(), names);
    CHECK_MESSAGE(a == b, src << " printed as " << a.to_string());
  }
}

TEST_CASE("property: random trees round-trip and print stably") {
  auto names = std::make_shared<const Expr::Names>(Expr::Names{"x", "y"});
  testing::RandomExprGenerator gen(names, 20240917);
  for (int i = 0; i < 500; ++i) {
    const Expr tree = gen.generate(4);
    const Expr parsed = parse(tree.to_string(), names);
    CHECK(parsed == tree);
    CHECK(parse(parsed.to_string(), names) == parsed);
  }
}

TEST_CASE("property: symbolic partials agree with central differences") {
  auto names = std::make_shared<const Expr::Names>(Expr::Names{"x", "y"});
  testing::RandomExprGenerator gen(names, 7);
  int accepted = 0;
  for (int attempts = 0; accepted < 300 && attempts < 20000; ++attempts) {
    const Expr e = gen.generate(3);
    const auto p = gen.point(0.2, 1.5);
    const int var = attempts % 2;
    const auto fd = testing::well_conditioned_fd(e, p, var);
    if (!fd) continue;
    ++accepted;
    double exact = 0.0;
    CHECK_NOTHROW_MESSAGE(exact = symbolic_partial(e, var).eval(p), e.to_string());
    CHECK_MESSAGE(std::abs(exact - *fd) <= 1e-6 * (1.0 + std::abs(exact)), e.to_string());
  }
  CHECK(accepted == 300);
}

TEST_CASE("expressions built from parts can be combined and differentiated") {
  const Expr phi = parse("0.3*x + 0.1*y^2", kXY);
  const Expr sigma = parse("0.2*x*y", kXY);
  const Expr p11 = apply(Func::Exp, phi + sigma);
  const std::vector<double> p = {0.7, -0.4};
  const double d = symbolic_partial(p11, 1).eval(p);
  const double expected = std::exp(0.3 * 0.7 + 0.1 * 0.16 + 0.2 * 0.7 * -0.4) * (0.2 * -0.4 + 0.2 * 0.7);
  CHECK(d == doctest::Approx(expected).epsilon(1e-14));
  CHECK_THROWS_AS((void)(phi + parse("theta", kSphere)), std::invalid_argument);
}
