#include <doctest.h>

#include <cmath>
#include <random>

#include "defgeo/cli.hpp"
#include "defgeo/errors.hpp"

using namespace defgeo;
using namespace defgeo::cli;

namespace {

const std::string kData = DEFGEO_TEST_DATA;

double value(const Report& r, std::size_t row, const std::string& column) {
  for (std::size_t i = 0; i < r.columns.size(); ++i)
    if (r.columns[i] == column) return r.rows[row][r.coordinates.size() + i];
  FAIL("no column " << column);
  return 0.0;
}

double max_prefix(const Report& r, const std::string& prefix) {
  double m = 0.0;
  for (std::size_t i = 0; i < r.columns.size(); ++i)
    if (r.columns[i].rfind(prefix + "_", 0) == 0)
      for (const auto& row : r.rows) m = std::max(m, std::abs(row[r.coordinates.size() + i]));
  return m;
}

std::string config_error(const std::string& text) {
  try {
    parse_geometry_config(text, "test.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kChart = R"("chart": {"coordinates": ["x", "y"], "box": [[-1, 1], [-1, 1]]})";

std::string doc(const std::string& extra) {
  return std::string("{") + kChart + R"(, "reference_metric": [["1", "0"], ["0", "1"]], )" + extra + "}";
}

}  // namespace

TEST_CASE("number formatting and hashing") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-10) == "1e-10");
  CHECK(format_number(4.0 / 3) == "1.3333333333333333");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("config errors name the location") {
  CHECK(config_error("{\n  \"chart\": \n}") .find("test.json:3:1") == 0);
  CHECK(config_error(doc(R"("deformation": [["1", "0"], ["0"]])")).find("/deformation/1") != std::string::npos);
  CHECK(config_error(doc(R"("deformation": [["1", "q"], ["0", "1"]])")).find("/deformation/0/1") != std::string::npos);
  CHECK(config_error(doc(R"("deformation": [["1", "0"], ["0", "1"]], "outputs": ["Riemann"])")).find("/outputs/0") !=
        std::string::npos);
  CHECK(config_error(doc(R"("deformation": [["1", "0"], ["0", "1"]], "sheme": "analytic")")).find("/sheme") !=
        std::string::npos);
  CHECK(config_error(doc(R"("deformation": [["1", "0"], ["0", "1"]], "scheme": {"mode": "spline"})")).find("/scheme") !=
        std::string::npos);
  CHECK(config_error(doc(R"("deformation": [["1", "0"], ["0", "1"]], "points": [[3, 0]])")).find("/points/0") !=
        std::string::npos);
  CHECK(config_error(doc(R"("outputs": ["g"])")).find("/deformation") != std::string::npos);
  CHECK(config_error(R"({"chart": {"coordinates": ["x", "y", "z"], "box": [[0, 1], [0, 1], [0, 1]]},
      "reference_metric": [["1","0","0"],["0","1","0"],["0","0","1"]],
      "deformation": [["1","0","0"],["0","1","0"],["0","0","1"]], "outputs": ["K"]})")
            .find("two-dimensional") != std::string::npos);
  CHECK_THROWS_AS(load_geometry_config(kData + "/does_not_exist.json"), ConfigError);
}

TEST_CASE("config defaults and overrides") {
  const GeometryConfig c = parse_geometry_config(doc(R"("deformation": [[1, 0], [0, 2.5]],
      "scheme": {"mode": "richardson", "step": 1e-4, "levels": 3}, "grid": {"resolution": 3, "margin": 0.1})"));
  CHECK(c.deformation->at(1)[1] == "2.5");
  CHECK(c.scheme.mode == DiffMode::Richardson);
  CHECK(c.scheme.step == 1e-4);
  CHECK(c.scheme.levels == 3);
  CHECK(c.resolution == 3);
  CHECK(*c.margin == 0.1);
  CHECK(c.outputs == std::vector<std::string>{"g", "Lbar", "L", "Lambda", "Gamma"});
}

TEST_CASE("identity deformation collapses onto the reference") {
  const Report r = run_evaluate(load_geometry_config(kData + "/identity.json"));
  CHECK(r.rows.size() == 25);
  CHECK(max_prefix(r, "Lambda") <= 1e-10);
  CHECK(max_prefix(r, "torsion") <= 1e-10);
  CHECK(max_prefix(r, "nonmetricity") <= 1e-10);
  for (std::size_t i = 0; i < r.rows.size(); ++i)
    for (const char* c : {"_0_0_0", "_0_0_1", "_1_0_0", "_1_1_1"})
      CHECK(std::abs(value(r, i, std::string("Gamma") + c) - value(r, i, std::string("gammabar") + c)) <= 1e-10);
  CHECK(r.passed());
}

TEST_CASE("shear config reproduces the golden rates") {
  const Report r = run_evaluate(load_geometry_config(kData + "/shear_point.json"));
  REQUIRE(r.rows.size() == 1);
  // Lbar^rho_{1 nu}: (rho, nu) = (0,0) 4/3, (1,0) -2/3
  CHECK(std::abs(value(r, 0, "Lbar_0_0_0") - 4.0 / 3) <= 1e-9);
  CHECK(std::abs(value(r, 0, "Lbar_1_0_0") + 2.0 / 3) <= 1e-9);
  CHECK(std::abs(value(r, 0, "Lbar_0_0_1")) <= 1e-9);
  CHECK(std::abs(value(r, 0, "L_0_0_0") - 20.0 / 9) <= 1e-9);
  CHECK(std::abs(value(r, 0, "L_0_0_1") - 10.0 / 9) <= 1e-9);
  CHECK(std::abs(value(r, 0, "L_1_0_0") + 16.0 / 9) <= 1e-9);
  CHECK(std::abs(value(r, 0, "L_1_0_1") + 8.0 / 9) <= 1e-9);
  CHECK(std::abs(value(r, 0, "K")) <= 1e-10);
  CHECK(r.passed());
}

TEST_CASE("recovery directive reproduces the shear deformation") {
  const Report r = run_evaluate(load_geometry_config(kData + "/shear_recover.json"));
  CHECK(r.rows.size() == 25);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const double x = r.rows[i][0];
    CHECK(std::abs(value(r, i, "P_0_0") - (1 + x)) <= 1e-9);
    CHECK(std::abs(value(r, i, "P_0_1") - 0.5) <= 1e-9);
    CHECK(std::abs(value(r, i, "P_1_1") - 1.0) <= 1e-9);
    const double c = 1.0 / (1 + x - 0.25);
    CHECK(std::abs(value(r, i, "Lbar_0_0_0") - c) <= 1e-9);
    CHECK(std::abs(value(r, i, "Lbar_1_0_0") + 0.5 * c) <= 1e-9);
  }
  CHECK(r.passed());
}

TEST_CASE("reports are deterministic") {
  const GeometryConfig c = load_geometry_config(kData + "/shear_recover.json");
  CHECK(to_json(run_evaluate(c)) == to_json(run_evaluate(c)));
  CHECK(to_csv(run_evaluate(c)) == to_csv(run_evaluate(c)));
  const auto v = [] { return to_json(run_verify("planar", 5, DifferentiationScheme::richardson())); };
  CHECK(v() == v());
}

TEST_CASE("CSV layout") {
  const GeometryConfig c = parse_geometry_config(doc(R"("deformation": [["1", "0"], ["0", "1"]],
      "outputs": ["Gamma", "K"], "points": [[0.5, 0.25]])"));
  const std::string csv = to_csv(run_evaluate(c));
  CHECK(csv.substr(0, csv.find('\n')) ==
        "x,y,Gamma_0_0_0,Gamma_0_0_1,Gamma_0_1_0,Gamma_0_1_1,Gamma_1_0_0,Gamma_1_0_1,Gamma_1_1_0,Gamma_1_1_1,K");
  CHECK(csv.substr(csv.find('\n') + 1) == "0.5,0.25,0,0,0,0,0,0,0,0,0\n");
}

TEST_CASE("non-pure deformations are rejected with the worst point") {
  try {
    run_evaluate(load_geometry_config(kData + "/not_pure.json"));
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.worst_point() == "(-1, -1)");
  }
}

TEST_CASE("verify reports") {
  const Report sphere = run_verify("sphere", 21, DifferentiationScheme::analytic());
  CHECK(sphere.passed());
  CHECK(sphere.rows.size() == 441);
  for (const auto& s : sphere.summary)
    if (s.name == "gaussian_curvature") CHECK(s.measured <= 1e-6);

  const Report shear = run_verify("shear", 21, DifferentiationScheme::analytic());
  CHECK(shear.passed());
  bool saw_fail_expectation = false;
  for (const auto& s : shear.summary) {
    if (s.name == "compensation_equals_raw") {
      saw_fail_expectation = true;
      CHECK(s.expectation == "fails");
    }
    if (s.name == "commutator_criterion") CHECK(s.passed);
  }
  CHECK(saw_fail_expectation);

  const Report homothety = run_verify("conformal_sphere", 21, DifferentiationScheme::analytic(), {{"factor", "0.4"}});
  CHECK(homothety.passed());
  for (const auto& s : homothety.summary)
    if (s.name == "homothety_curvature" || s.name == "compensation") CHECK(s.measured <= 1e-10);

  CHECK_THROWS_AS(run_verify("torus", 5, DifferentiationScheme::analytic()), std::invalid_argument);
}

TEST_CASE("recover reports") {
  const MetricConfig flat = load_metric_config(kData + "/flat_theta_phi.json");
  const Report same = run_recover(flat, flat, 5);
  for (const auto& row : same.rows) {
    CHECK(row[2] == 1.0);
    CHECK(row[3] == 0.0);
    CHECK(row[5] == 1.0);
  }

  const Report sphere = run_recover(flat, load_metric_config(kData + "/sphere_r2.json"), 5);
  for (std::size_t i = 0; i < sphere.rows.size(); ++i) {
    CHECK(std::abs(value(sphere, i, "P_0_0") - 2.0) <= 1e-12);
    CHECK(std::abs(value(sphere, i, "P_1_1") - 2.0 * std::sin(sphere.rows[i][0])) <= 1e-12);
    CHECK(std::abs(value(sphere, i, "P_0_1")) <= 1e-12);
  }
  CHECK(sphere.passed());
}

TEST_CASE("recover: random SPD pairs roundtrip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  auto spd = [&] {
    const double a = u(rng), b = u(rng), c = u(rng);
    const double d00 = 1 + a * a + 0.5, d01 = a * b, d11 = 1 + b * b + c * c;
    return "[[" + format_number(d00) + ", " + format_number(d01) + "], [" + format_number(d01) + ", " +
           format_number(d11) + "]]";
  };
  for (int i = 0; i < 20; ++i) {
    const std::string chart = R"({"chart": {"coordinates": ["x", "y"], "box": [[0, 1], [0, 1]]}, "metric": )";
    const Report r = run_recover(parse_metric_config(chart + spd() + "}"), parse_metric_config(chart + spd() + "}"), 2);
    for (std::size_t k = 0; k < r.rows.size(); ++k) CHECK(value(r, k, "relative_residual") <= 1e-9);
  }
}

TEST_CASE("recover: ill-conditioned pairs are reported") {
  const std::string chart = R"({"chart": {"coordinates": ["x", "y"], "box": [[0, 1], [0, 1]]}, "metric": )";
  const MetricConfig gbar = parse_metric_config(chart + R"([["1e5", "0"], ["0", "1"]]})");
  const MetricConfig g = parse_metric_config(chart + R"([["1e-3", "0"], ["0", "1e5"]]})");
  try {
    run_recover(gbar, g, 2);
    FAIL("expected a recovery error");
  } catch (const RecoveryError& e) {
    CHECK(e.condition_number() > kConditionLimit);
  }
  const std::string other = R"({"chart": {"coordinates": ["x", "y"], "box": [[0, 2], [0, 1]]}, "metric": [["1", "0"], ["0", "1"]]})";
  CHECK_THROWS_AS(run_recover(gbar, parse_metric_config(other), 2), ConfigError);
}
