#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "defgeo/errors.hpp"
#include "defgeo/scenarios.hpp"

using namespace defgeo;

namespace {

std::string describe(const VerificationReport& r) {
  std::ostringstream os;
  for (const auto& c : r.checks)
    if (!c.passed) os << r.scenario << ": " << c.name << " measured " << c.measured << " tol " << c.tolerance << "\n";
  return os.str();
}

}  // namespace

TEST_CASE("every built-in scenario verifies in analytic mode") {
  for (const auto& info : builtin_scenarios()) {
    const Scenario s = make_scenario(info.name);
    const VerificationReport r = verify_scenario(s, 9, DifferentiationScheme::analytic());
    CHECK_MESSAGE(r.passed(), describe(r));
    CHECK(r.checks.size() > 10);
  }
}

TEST_CASE("every built-in scenario verifies with Richardson differences") {
  for (const auto& info : builtin_scenarios()) {
    const Scenario s = make_scenario(info.name);
    const VerificationReport r = verify_scenario(s, 5, DifferentiationScheme::richardson());
    CHECK_MESSAGE(r.passed(), describe(r));
  }
}

TEST_CASE("shear breaks the coincidence and says so") {
  const VerificationReport r = verify_scenario(make_scenario("shear"), 5, DifferentiationScheme::analytic());
  bool found = false;
  for (const auto& c : r.checks)
    if (c.name == "compensation_equals_raw") {
      found = true;
      CHECK(c.expectation == Expectation::Fails);
      CHECK(c.measured > 1e-3);
      CHECK(c.passed);
    }
  CHECK(found);
}

TEST_CASE("shear closed forms at the golden point") {
  const Scenario s = make_scenario("shear");
  const ChartPoint p{0, 0};
  Matrix raw(2, 2), L(2, 2), Pinv(2, 2);
  raw << 4.0 / 3, 0, -2.0 / 3, 0;
  L << 20.0 / 9, 10.0 / 9, -16.0 / 9, -8.0 / 9;
  Pinv << 4.0 / 3, -2.0 / 3, -2.0 / 3, 4.0 / 3;
  CHECK(max_abs(s.raw_rate(p)[0] - raw) < 1e-15);
  CHECK(max_abs(s.deformed_rate(p)[0] - L) < 1e-14);
  CHECK(max_abs(s.inverse_deformation(p) - Pinv) < 1e-15);
}

TEST_CASE("scenario parameters and preconditions") {
  CHECK(make_scenario("sphere", {{"R", "5"}}).metric(ChartPoint{std::numbers::pi / 2, 0})(0, 0) == 25.0);
  CHECK_THROWS_AS(make_scenario("torus"), std::invalid_argument);
  CHECK_THROWS_AS(make_scenario("sphere", {{"radius", "2"}}), std::invalid_argument);
  CHECK_THROWS_AS(make_scenario("sphere", {{"R", "-1"}}), std::invalid_argument);
  CHECK_THROWS_AS(make_scenario("sphere", {{"R", "two"}}), std::invalid_argument);
  CHECK_THROWS_AS(make_scenario("shear", {{"s", "1.5"}}), std::invalid_argument);
  CHECK_THROWS_AS(make_scenario("shear", {{"a", "0.1 + x"}}), ValidationError);
  CHECK_THROWS_AS(make_scenario("shear", {{"a", "1 + y"}}), std::invalid_argument);
  CHECK_THROWS_AS(make_scenario("planar", {{"phi", "0.3*z"}}), ParseError);
  CHECK(make_scenario("shear", {{"s", "0"}}).name == "shear_baseline");
}

TEST_CASE("shear baseline with constant a = 1 is the identity") {
  const Scenario s = nondiagonal_shear_baseline(ScalarField::parse(shear_chart(), "1"));
  const VerificationReport r = verify_scenario(s, 5, DifferentiationScheme::analytic());
  CHECK_MESSAGE(r.passed(), describe(r));
  const PointGeometry pg = DeformedGeometry(s.deformation).evaluate(ChartPoint{0.1, 0.2}, DifferentiationScheme::analytic());
  CHECK(pg.raw.as_tensor().max_abs() == 0.0);
  CHECK(pg.lambda.as_tensor().max_abs() == 0.0);
}

TEST_CASE("conformal sphere with constant factor is a homothety") {
  const Scenario s = conformal_sphere(2.0, ScalarField::parse(sphere_chart(), "0.25"));
  REQUIRE(s.homothety_curvature);
  CHECK(s.homothety_curvature(ChartPoint{1, 1}) == doctest::Approx(std::exp(-0.5) / 4));
  const VerificationReport r = verify_scenario(s, 5, DifferentiationScheme::analytic());
  CHECK_MESSAGE(r.passed(), describe(r));
  const PointGeometry pg = DeformedGeometry(s.deformation).evaluate(ChartPoint{1, 1}, DifferentiationScheme::analytic());
  CHECK(pg.lambda.as_tensor().max_abs() == 0.0);
}

TEST_CASE("verification is deterministic") {
  const auto a = verify_scenario(make_scenario("planar"), 5, DifferentiationScheme::central());
  const auto b = verify_scenario(make_scenario("planar"), 5, DifferentiationScheme::central());
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) CHECK(a.checks[i].measured == b.checks[i].measured);
}
