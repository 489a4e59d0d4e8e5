#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "defgeo/errors.hpp"
#include "defgeo/metric_geometry.hpp"

using namespace defgeo;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const Chart> sphere() {
  return std::make_shared<const Chart>(std::vector<std::string>{"theta", "phi"},
                                       Box{{{0.3, kPi - 0.3}, {0.0, 2 * kPi}}});
}

std::shared_ptr<const Chart> plane() {
  return std::make_shared<const Chart>(std::vector<std::string>{"x", "y"}, Box{{{-2, 2}, {-2, 2}}});
}

MetricField round_sphere(double R) {
  const std::string r2 = std::to_string(R * R);
  return MetricField(MatrixField::parse(sphere(), {{r2, "0"}, {"0", r2 + "*sin(theta)^2"}}));
}

const DifferentiationScheme kSchemes[] = {DifferentiationScheme::analytic(), DifferentiationScheme::central(),
                                          DifferentiationScheme::richardson()};

// Oracle: Christoffel symbols by brute-force central differences of the
// metric components, summed with explicit loops.
Tensor3 brute_christoffel(const MatrixField& g, const ChartPoint& p) {
  const int n = g.size();
  const double h = 1e-6;
  std::vector<Matrix> dg;
  for (int m = 0; m < n; ++m) dg.push_back((g(p.shifted(m, h)) - g(p.shifted(m, -h))) / (2 * h));
  const Matrix gi = g(p).inverse();
  Tensor3 G(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += 0.5 * gi(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        G(k, i, j) = s;
      }
  return G;
}

}  // namespace

TEST_CASE("metric at a point rejects non-metrics") {
  Matrix bad(2, 2);
  bad << 1, 2, 2, 1;  // indefinite
  CHECK_THROWS_AS(MetricAtPoint{bad}, SingularMetricError);
  bad << 1, 0.5, 0.4, 1;
  CHECK_THROWS_AS(MetricAtPoint{bad}, SingularMetricError);
  bad << 1, 0, 0, 0;
  CHECK_THROWS_AS(MetricAtPoint{bad}, SingularMetricError);
  bad << 2, 1, 1, 2;
  const MetricAtPoint g(bad);
  CHECK(g.determinant() == doctest::Approx(3.0));
  CHECK(max_abs(g.matrix() * g.inverse() - Matrix::Identity(2, 2)) < 1e-14);
}

TEST_CASE("sphere Christoffel symbols at R = 2, theta = pi/3") {
  const MetricField g = round_sphere(2.0);
  const ChartPoint p{kPi / 3, 0.7};
  for (const auto& s : kSchemes) {
    const ConnectionCoefficients c = christoffel(g, p, s);
    CHECK(c.levi_civita);
    CHECK(c.values(0, 1, 1) == doctest::Approx(-std::sin(kPi / 3) * std::cos(kPi / 3)).epsilon(1e-9));
    CHECK(c.values(1, 0, 1) == doctest::Approx(1.0 / std::tan(kPi / 3)).epsilon(1e-9));
    CHECK(c.values(1, 1, 0) == doctest::Approx(1.0 / std::tan(kPi / 3)).epsilon(1e-9));
    CHECK(std::abs(c.values(0, 0, 0)) + std::abs(c.values(1, 1, 1)) + std::abs(c.values(0, 0, 1)) < 1e-9);
  }
}

TEST_CASE("Christoffel symbols match a brute-force oracle on a non-diagonal metric") {
  const auto F = MatrixField::parse(plane(), {{"2 + x^2", "0.3*x*y"}, {"0.3*x*y", "1 + exp(0.2*y)"}});
  const MetricField g(F);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 50; ++i) {
    const ChartPoint p{u(rng), u(rng)};
    const Tensor3 oracle = brute_christoffel(F, p);
    CHECK((christoffel(g, p, DifferentiationScheme::analytic()).values - oracle).max_abs() < 1e-8);
  }
}

TEST_CASE("curvature of round spheres and the flat plane") {
  for (double R : {1.0, 2.0, 5.0}) {
    const MetricField g = round_sphere(R);
    for (const auto& s : {DifferentiationScheme::analytic(), DifferentiationScheme::richardson()}) {
      const CurvatureReport c = riemann(g, ChartPoint{1.1, 2.0}, s);
      REQUIRE(c.gaussian);
      CHECK(*c.gaussian == doctest::Approx(1.0 / (R * R)).epsilon(1e-6));
      CHECK(c.scalar == doctest::Approx(2.0 / (R * R)).epsilon(1e-6));
      // R^theta_{phi theta phi} = sin^2 theta
      CHECK(c.riemann(0, 1, 0, 1) == doctest::Approx(std::sin(1.1) * std::sin(1.1)).epsilon(1e-6));
      CHECK(c.riemann(0, 1, 1, 0) == doctest::Approx(-std::sin(1.1) * std::sin(1.1)).epsilon(1e-6));
    }
  }
  const MetricField flat(MatrixField::parse(plane(), {{"1", "0"}, {"0", "1"}}));
  const CurvatureReport c = riemann(flat, ChartPoint{0.2, 0.1}, DifferentiationScheme::analytic());
  CHECK(c.scalar == 0.0);
}

TEST_CASE("Laplace-Beltrami examples") {
  const MetricField flat(MatrixField::parse(plane(), {{"1", "0"}, {"0", "1"}}));
  const auto f = ScalarField::parse(plane(), "x^2 + y^2");
  for (const auto& s : kSchemes)
    CHECK(laplace_beltrami(flat, f, ChartPoint{0.3, -0.8}, s) == doctest::Approx(4.0).epsilon(1e-6));

  const MetricField unit = round_sphere(1.0);
  const auto c = ScalarField::parse(sphere(), "cos(theta)");
  for (double th : {0.5, 1.0, 2.2}) {
    const ChartPoint p{th, 1.0};
    CHECK(laplace_beltrami(unit, c, p, DifferentiationScheme::analytic()) ==
          doctest::Approx(-2 * std::cos(th)).epsilon(1e-12));
    CHECK(laplace_beltrami(unit, c, p, DifferentiationScheme::richardson()) ==
          doctest::Approx(-2 * std::cos(th)).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("Christoffel symbols transform as a connection under x -> 2x + 1") {
  // Flat chart (u, v) with metric diag(1, 1); new coordinates X = 2u + 1,
  // Y = v give the metric diag(1/4, 1). A curved example: g = diag(1, u^2).
  const auto uv = std::make_shared<const Chart>(std::vector<std::string>{"u", "v"}, Box{{{0.5, 2}, {-1, 1}}});
  const auto XY = std::make_shared<const Chart>(std::vector<std::string>{"X", "Y"}, Box{{{2, 5}, {-1, 1}}});
  const MetricField g(MatrixField::parse(uv, {{"1", "0"}, {"0", "u^2"}}));
  // u = (X - 1)/2, J = du/dX = 1/2
  const MetricField gt(MatrixField::parse(XY, {{"0.25", "0"}, {"0", "((X - 1)/2)^2"}}));
  const ChartPoint p{1.3, 0.2};
  const ChartPoint q{2 * 1.3 + 1, 0.2};
  const Tensor3 a = christoffel(g, p, DifferentiationScheme::analytic()).values;
  const Tensor3 b = christoffel(gt, q, DifferentiationScheme::analytic()).values;
  // Linear map, so no inhomogeneous term: Gt^k_ij = (dX^k/du^a) G^a_bc (du^b/dX^i)(du^c/dX^j).
  const double J[2] = {0.5, 1.0};  // du^i/dX^i
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(b(k, i, j) == doctest::Approx(a(k, i, j) / J[k] * J[i] * J[j]).epsilon(1e-12));
}
