#include "defgeo/scenarios.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace defgeo {

namespace {

constexpr double kPi = std::numbers::pi;

const Expr& expr_of(const ScalarField& f, const char* what) {
  if (!f.expression()) throw std::invalid_argument(std::string(what) + " must be an expression-backed field");
  return *f.expression();
}

MetricField flat_metric(const std::shared_ptr<const Chart>& chart) {
  const Expr one = Expr::number(1.0, chart->shared_names());
  const Expr zero = Expr::number(0.0, chart->shared_names());
  return MetricField(MatrixField::from_exprs(chart, {{one, zero}, {zero, one}}));
}

RateTensor rates(std::vector<Matrix> m, RateKind kind) {
  RateTensor r;
  r.directions = std::move(m);
  r.kind = kind;
  return r;
}

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

std::shared_ptr<const Chart> require_planar(const ScalarField& f, const char* what) {
  if (f.chart().dim() != 2) throw std::invalid_argument(std::string(what) + " must live on a two-dimensional chart");
  return f.shared_chart();
}

// Gamma = Gamma0 + Lambda written out component by component.
Tensor3 add_rates(Tensor3 gamma, const RateTensor& lambda) {
  const int n = gamma.dim();
  for (int r = 0; r < n; ++r)
    for (int m = 0; m < n; ++m)
      for (int v = 0; v < n; ++v) gamma(r, m, v) += lambda[m](r, v);
  return gamma;
}

}  // namespace

std::shared_ptr<const Chart> planar_chart(double half_width) {
  if (!(half_width > 0.0)) throw std::invalid_argument("chart half width must be positive");
  return std::make_shared<const Chart>(std::vector<std::string>{"x", "y"},
                                       Box{{{-half_width, half_width}, {-half_width, half_width}}});
}

std::shared_ptr<const Chart> sphere_chart() {
  std::vector<Box> poles = {Box{{{-0.05, 0.05}, {-1.0, 2 * kPi + 1.0}}},
                            Box{{{kPi - 0.05, kPi + 0.05}, {-1.0, 2 * kPi + 1.0}}}};
  return std::make_shared<const Chart>(std::vector<std::string>{"theta", "phi"},
                                       Box{{{0.3, kPi - 0.3}, {0.0, 2 * kPi}}}, std::move(poles));
}

std::shared_ptr<const Chart> shear_chart() { return planar_chart(0.5); }

// ---------------------------------------------------------------------------

Scenario planar_dilation_shear(const ScalarField& phi, const ScalarField& sigma) {
  auto chart = require_planar(phi, "phi");
  if (!sigma.chart().same_as(*chart)) throw std::invalid_argument("phi and sigma must share a chart");
  const Expr& f = expr_of(phi, "phi");
  const Expr& s = expr_of(sigma, "sigma");
  const Expr zero = constant(0.0, f);
  const Expr ef = apply(Func::Exp, f);
  MatrixField P = MatrixField::from_exprs(chart, {{ef * apply(Func::Exp, s), zero}, {zero, ef * apply(Func::Exp, -s)}});

  Scenario sc{"planar", chart, DeformationField(std::move(P), flat_metric(chart))};

  // df = (d_x, d_y) of phi + sigma and phi - sigma
  auto plus = [phi, sigma](const ChartPoint& p, int i) {
    return phi.analytic_partial(p, i) + sigma.analytic_partial(p, i);
  };
  auto minus = [phi, sigma](const ChartPoint& p, int i) {
    return phi.analytic_partial(p, i) - sigma.analytic_partial(p, i);
  };

  sc.metric = [phi, sigma](const ChartPoint& p) {
    return diag2(std::exp(2 * (phi(p) + sigma(p))), std::exp(2 * (phi(p) - sigma(p))));
  };
  sc.levi_civita = [=](const ChartPoint& p) {
    const double e4s = std::exp(4 * sigma(p));
    Tensor3 G(2);
    G(0, 0, 0) = plus(p, 0);
    G(0, 0, 1) = G(0, 1, 0) = plus(p, 1);
    G(0, 1, 1) = -minus(p, 0) / e4s;
    G(1, 0, 0) = -e4s * plus(p, 1);
    G(1, 0, 1) = G(1, 1, 0) = minus(p, 0);
    G(1, 1, 1) = minus(p, 1);
    return G;
  };
  sc.raw_rate = [=](const ChartPoint& p) {
    return rates({diag2(plus(p, 0), minus(p, 0)), diag2(plus(p, 1), minus(p, 1))}, RateKind::Raw);
  };
  sc.raw_dilation = [phi](const ChartPoint& p) {
    const double a = phi.analytic_partial(p, 0), b = phi.analytic_partial(p, 1);
    return rates({diag2(a, a), diag2(b, b)}, RateKind::Raw);
  };
  sc.raw_shear = [sigma](const ChartPoint& p) {
    const double a = sigma.analytic_partial(p, 0), b = sigma.analytic_partial(p, 1);
    return rates({diag2(a, -a), diag2(b, -b)}, RateKind::Raw);
  };
  sc.deformed_rate = [raw = sc.raw_rate](const ChartPoint& p) {
    RateTensor r = raw(p);
    r.kind = RateKind::DeformedFrame;
    return r;
  };
  sc.compensation = [raw = sc.raw_rate](const ChartPoint& p) {
    RateTensor r = raw(p);
    r.kind = RateKind::Compensation;
    return r;
  };
  sc.total_connection = [lc = sc.levi_civita, raw = sc.raw_rate](const ChartPoint& p) {
    return add_rates(lc(p), raw(p));
  };
  return sc;
}

Scenario pure_dilation(const ScalarField& phi) {
  auto chart = require_planar(phi, "phi");
  const ScalarField zero = ScalarField::from_expr(chart, constant(0.0, expr_of(phi, "phi")));
  Scenario sc = planar_dilation_shear(phi, zero);
  sc.name = "dilation";
  sc.raw_shear = nullptr;
  // Gamma^k_ij = Gamma0^k_ij + delta^k_j d_i phi
  sc.total_connection = [lc = sc.levi_civita, phi](const ChartPoint& p) {
    Tensor3 G = lc(p);
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) G(k, i, k) += phi.analytic_partial(p, i);
    return G;
  };
  return sc;
}

Scenario sphere_from_flat(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("sphere radius must be positive");
  auto chart = sphere_chart();
  const auto& names = chart->shared_names();
  const Expr R = Expr::number(radius, names);
  const Expr zero = Expr::number(0.0, names);
  const Expr theta = Expr::variable(0, names);
  MatrixField P = MatrixField::from_exprs(chart, {{R, zero}, {zero, R * apply(Func::Sin, theta)}});

  Scenario sc{"sphere", chart, DeformationField(std::move(P), flat_metric(chart))};
  const double R2 = radius * radius;
  sc.metric = [R2](const ChartPoint& p) { return diag2(R2, R2 * std::sin(p[0]) * std::sin(p[0])); };
  sc.levi_civita = [](const ChartPoint& p) {
    Tensor3 G(2);
    G(0, 1, 1) = -std::sin(p[0]) * std::cos(p[0]);
    G(1, 0, 1) = G(1, 1, 0) = std::cos(p[0]) / std::sin(p[0]);
    return G;
  };
  sc.raw_rate = [](const ChartPoint& p) {
    return rates({diag2(0.0, std::cos(p[0]) / std::sin(p[0])), Matrix::Zero(2, 2)}, RateKind::Raw);
  };
  sc.deformed_rate = [raw = sc.raw_rate](const ChartPoint& p) {
    RateTensor r = raw(p);
    r.kind = RateKind::DeformedFrame;
    return r;
  };
  sc.compensation = [raw = sc.raw_rate](const ChartPoint& p) {
    RateTensor r = raw(p);
    r.kind = RateKind::Compensation;
    return r;
  };
  sc.gaussian_curvature = [R2](const ChartPoint&) { return 1.0 / R2; };
  return sc;
}

namespace {

Scenario shear_family(const ScalarField& a, double s, const char* name) {
  auto chart = require_planar(a, "a");
  const Expr& ae = expr_of(a, "a");
  if (ae.depends_on(1)) throw std::invalid_argument("a must depend on the first coordinate only");
  if (!std::isfinite(s) || std::abs(s) >= 1.0) throw std::invalid_argument("shear parameter must satisfy |s| < 1");

  // a > s^2 across the chart box; a depends on x only, so a line suffices.
  const Interval& xi = chart->box().intervals[0];
  const double y0 = 0.5 * (chart->box().intervals[1].lo + chart->box().intervals[1].hi);
  double worst = std::numeric_limits<double>::infinity();
  ChartPoint worst_point;
  for (int k = 0; k <= 200; ++k) {
    const ChartPoint p{xi.lo + xi.width() * k / 200.0, y0};
    const double margin = a(p) - s * s;
    if (margin < worst) worst = margin, worst_point = p;
  }
  if (!(worst > 0.0)) throw ValidationError("shear requires a(x) > s^2", worst_point.to_string(), -worst);

  const Expr se = constant(s, ae);
  const Expr one = constant(1.0, ae);
  MatrixField P = MatrixField::from_exprs(chart, {{ae, se}, {se, one}});
  Scenario sc{name, chart, DeformationField(std::move(P), flat_metric(chart))};
  sc.coincidence_expected = (s == 0.0);

  const double s2 = s * s;
  sc.metric = [a, s, s2](const ChartPoint& p) {
    const double av = a(p);
    Matrix g(2, 2);
    g << av * av + s2, s * (av + 1), s * (av + 1), 1 + s2;
    return g;
  };
  sc.inverse_deformation = [a, s, s2](const ChartPoint& p) {
    const double av = a(p);
    Matrix m(2, 2);
    m << 1, -s, -s, av;
    return Matrix(m / (av - s2));
  };
  sc.raw_rate = [a, s, s2](const ChartPoint& p) {
    const double c = a.analytic_partial(p, 0) / (a(p) - s2);
    Matrix L1(2, 2);
    L1 << c, 0, -s * c, 0;
    return rates({L1, Matrix::Zero(2, 2)}, RateKind::Raw);
  };
  sc.deformed_rate = [a, s, s2](const ChartPoint& p) {
    const double av = a(p);
    const double d = av - s2;
    const double c = a.analytic_partial(p, 0) / (d * d);
    Matrix L1(2, 2);
    L1 << av * (1 + s2), s * (1 + s2), -av * s * (av + 1), -s2 * (av + 1);
    return rates({Matrix(c * L1), Matrix::Zero(2, 2)}, RateKind::DeformedFrame);
  };
  return sc;
}

}  // namespace

Scenario nondiagonal_shear(const ScalarField& a, double s) {
  if (s == 0.0) throw std::invalid_argument("shear parameter must be nonzero; use the baseline for s = 0");
  return shear_family(a, s, "shear");
}

Scenario nondiagonal_shear_baseline(const ScalarField& a) { return shear_family(a, 0.0, "shear_baseline"); }

Scenario conformal_sphere(double radius, const ScalarField& factor) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("sphere radius must be positive");
  auto chart = factor.shared_chart();
  if (chart->dim() != 2) throw std::invalid_argument("conformal factor must live on a (theta, phi) chart");
  const Expr& f = expr_of(factor, "conformal factor");
  const auto& names = chart->shared_names();
  const Expr R = Expr::number(radius, names);
  const Expr zero = Expr::number(0.0, names);
  const Expr theta = Expr::variable(0, names);
  const Expr st = apply(Func::Sin, theta);
  MetricField gbar(MatrixField::from_exprs(chart, {{R * R, zero}, {zero, R * R * st * st}}));
  const Expr ef = apply(Func::Exp, f);
  MatrixField P = MatrixField::from_exprs(chart, {{ef, zero}, {zero, ef}});

  Scenario sc{"conformal_sphere", chart, DeformationField(std::move(P), std::move(gbar))};
  sc.conformal_factor = factor;
  const double R2 = radius * radius;

  sc.metric = [factor, R2](const ChartPoint& p) {
    const double e = std::exp(2 * factor(p));
    return diag2(e * R2, e * R2 * std::sin(p[0]) * std::sin(p[0]));
  };
  sc.raw_rate = [factor](const ChartPoint& p) {
    const double a = factor.analytic_partial(p, 0), b = factor.analytic_partial(p, 1);
    return rates({diag2(a, a), diag2(b, b)}, RateKind::Raw);
  };
  sc.deformed_rate = [raw = sc.raw_rate](const ChartPoint& p) {
    RateTensor r = raw(p);
    r.kind = RateKind::DeformedFrame;
    return r;
  };
  sc.compensation = [raw = sc.raw_rate](const ChartPoint& p) {
    RateTensor r = raw(p);
    r.kind = RateKind::Compensation;
    return r;
  };
  sc.reference_laplacian = [factor, R2](const ChartPoint& p) {
    const double s = std::sin(p[0]);
    return (factor.analytic_second_partial(p, 0, 0) + std::cos(p[0]) / s * factor.analytic_partial(p, 0) +
            factor.analytic_second_partial(p, 1, 1) / (s * s)) /
           R2;
  };
  sc.gaussian_curvature = [factor, R2, lap = sc.reference_laplacian](const ChartPoint& p) {
    return std::exp(-2 * factor(p)) * (1.0 / R2 - lap(p));
  };
  if (!f.depends_on(0) && !f.depends_on(1)) {
    const double c = f.eval(std::vector<double>{0.0, 0.0});
    sc.homothety_curvature = [c, R2](const ChartPoint&) { return std::exp(-2 * c) / R2; };
  }
  return sc;
}

// ---------------------------------------------------------------------------

const std::vector<ScenarioInfo>& builtin_scenarios() {
  static const std::vector<ScenarioInfo> list = {
      {"planar", "flat plane, P = e^phi diag(e^sigma, e^-sigma) on [-1,1]^2",
       {{"phi", "0.3*x + 0.1*y^2"}, {"sigma", "0.2*x*y"}}},
      {"dilation", "flat plane, P = e^phi I on [-1,1]^2", {{"phi", "0.3*x + 0.1*y^2"}}},
      {"sphere", "flat (theta, phi) plane deformed into the round sphere, P = diag(R, R sin theta)", {{"R", "2"}}},
      {"shear", "flat plane, P = [[a(x), s], [s, 1]] on [-0.5,0.5]^2", {{"a", "1 + x"}, {"s", "0.5"}}},
      {"conformal_sphere", "round sphere of radius R, P = e^factor I",
       {{"R", "1"}, {"factor", "0.1*cos(theta)"}}},
  };
  return list;
}

namespace {

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v))
    throw std::invalid_argument("parameter '" + key + "' must be a number, got '" + text + "'");
  return v;
}

}  // namespace

Scenario make_scenario(const std::string& name, const std::map<std::string, std::string>& params) {
  const ScenarioInfo* info = nullptr;
  for (const auto& s : builtin_scenarios())
    if (s.name == name) info = &s;
  if (!info) throw std::invalid_argument("unknown scenario '" + name + "'");
  std::map<std::string, std::string> v = info->defaults;
  for (const auto& [k, value] : params) {
    if (!v.count(k)) throw std::invalid_argument("scenario '" + name + "' has no parameter '" + k + "'");
    v[k] = value;
  }

  if (name == "planar") {
    auto chart = planar_chart();
    return planar_dilation_shear(ScalarField::parse(chart, v["phi"]), ScalarField::parse(chart, v["sigma"]));
  }
  if (name == "dilation") return pure_dilation(ScalarField::parse(planar_chart(), v["phi"]));
  if (name == "sphere") return sphere_from_flat(parse_number("R", v["R"]));
  if (name == "shear") {
    const ScalarField a = ScalarField::parse(shear_chart(), v["a"]);
    const double s = parse_number("s", v["s"]);
    return s == 0.0 ? nondiagonal_shear_baseline(a) : nondiagonal_shear(a, s);
  }
  return conformal_sphere(parse_number("R", v["R"]), ScalarField::parse(sphere_chart(), v["factor"]));
}

// ---------------------------------------------------------------------------

bool VerificationReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

double stencil_margin(const Chart& chart, const DifferentiationScheme& scheme, bool curvature) {
  if (scheme.mode == DiffMode::Analytic) return 0.0;
  double scale = 0.0;
  for (const auto& iv : chart.box().intervals) scale = std::max({scale, std::abs(iv.lo), std::abs(iv.hi)});
  return 1.5 * scheme.reach(curvature ? 2 : 1, scale);
}

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double rel(const Matrix& a, const Matrix& b) { return max_abs(a - b) / std::max(1.0, max_abs(b)); }

double rel(const Tensor3& a, const Tensor3& b) { return (a - b).max_abs() / std::max(1.0, b.max_abs()); }

double rel(const RateTensor& a, const RateTensor& b) {
  double r = 0.0;
  for (int m = 0; m < a.dim(); ++m) r = std::max(r, rel(a[m], b[m]));
  return r;
}

RateTensor sum(const RateTensor& a, const RateTensor& b) {
  RateTensor r = a;
  for (std::size_t m = 0; m < r.directions.size(); ++m) r.directions[m] += b.directions[m];
  return r;
}

class Ledger {
 public:
  void next_point() { rows_.emplace_back(); }
  void hold(const std::string& name, double tol, double residual) {
    const std::size_t i = find(name, tol, Expectation::Holds);
    CheckResult& c = checks_[i];
    c.measured = std::max(c.measured, residual);
    ++c.points;
    put(i, residual);
  }
  // Records a separation that must stay above tol.
  void separate(const std::string& name, double tol, double separation) {
    const std::size_t i = find(name, tol, Expectation::Fails);
    CheckResult& c = checks_[i];
    c.measured = c.points == 0 ? separation : std::min(c.measured, separation);
    ++c.points;
    put(i, separation);
  }
  void finish(VerificationReport& out) {
    for (auto& c : checks_) {
      if (c.expectation == Expectation::Holds)
        c.passed = c.points > 0 && c.measured <= c.tolerance;
      else
        c.passed = c.points > 0 && c.measured > c.tolerance;
    }
    for (auto& r : rows_) r.resize(checks_.size(), std::numeric_limits<double>::quiet_NaN());
    out.checks = std::move(checks_);
    out.residuals = std::move(rows_);
  }

 private:
  std::size_t find(const std::string& name, double tol, Expectation e) {
    for (std::size_t i = 0; i < checks_.size(); ++i)
      if (checks_[i].name == name) return i;
    checks_.push_back(CheckResult{name, tol, 0.0, e, 0, false});
    return checks_.size() - 1;
  }
  void put(std::size_t i, double v) {
    auto& row = rows_.back();
    if (row.size() <= i) row.resize(i + 1, std::numeric_limits<double>::quiet_NaN());
    row[i] = v;
  }
  std::vector<CheckResult> checks_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace

VerificationReport verify_scenario(const Scenario& s, int resolution, const DifferentiationScheme& scheme) {
  scheme.validate();
  const bool want_curvature = static_cast<bool>(s.gaussian_curvature) || static_cast<bool>(s.homothety_curvature);
  const bool nested = want_curvature || static_cast<bool>(s.reference_laplacian);
  const auto points = s.chart->grid(resolution, stencil_margin(*s.chart, scheme, nested));
  const DeformedGeometry geo(s.deformation);

  Ledger led;
  for (const ChartPoint& p : points) {
    led.next_point();
    const PointGeometry pg = geo.evaluate(p, scheme, want_curvature);
    const IdentityResiduals id = identity_residuals(pg);

    led.hold("pure_deformation", kAlgebraicTol, check_pure_deformation(pg.P, pg.gbar).symmetry_defect);
    if (s.metric) led.hold("metric", kAlgebraicTol, rel(pg.g.matrix(), s.metric(p)));
    if (s.inverse_deformation) led.hold("inverse_deformation", kAlgebraicTol, rel(Matrix(pg.P.inverse()), s.inverse_deformation(p)));
    if (s.levi_civita) led.hold("levi_civita", kFirstDerivativeTol, rel(pg.gamma0.values, s.levi_civita(p)));
    if (s.raw_rate) led.hold("raw_rate", kFirstDerivativeTol, rel(pg.raw, s.raw_rate(p)));
    if (s.raw_dilation && s.raw_shear)
      led.hold("raw_rate_split", kFirstDerivativeTol, rel(pg.raw, sum(s.raw_dilation(p), s.raw_shear(p))));
    if (s.deformed_rate) led.hold("deformed_rate", kFirstDerivativeTol, rel(pg.deformed, s.deformed_rate(p)));
    if (s.compensation) led.hold("compensation", kFirstDerivativeTol, rel(pg.lambda, s.compensation(p)));
    if (s.total_connection)
      led.hold("total_connection", kFirstDerivativeTol, rel(pg.total.coefficients.values, s.total_connection(p)));
    if (s.gaussian_curvature)
      led.hold("gaussian_curvature", kCurvatureTol, rel(*pg.curvature->gaussian, s.gaussian_curvature(p)));
    if (s.homothety_curvature)
      led.hold("homothety_curvature", kCurvatureTol, rel(*pg.curvature->gaussian, s.homothety_curvature(p)));
    if (s.reference_laplacian && s.conformal_factor)
      led.hold("reference_laplacian", kCurvatureTol,
               rel(laplace_beltrami(s.deformation.reference(), *s.conformal_factor, p, scheme), s.reference_laplacian(p)));

    led.hold("deviation_equals_compensation", kAlgebraicTol, id.deviation_equals_lambda);
    led.hold("compensation_self_adjoint", kAlgebraicTol, id.lambda_self_adjoint);
    led.hold("sym_idempotent", kAlgebraicTol, id.sym_idempotent);
    led.hold("antisymmetric_remainder", kAlgebraicTol, id.antisymmetric_remainder);
    led.hold("frame_similarity", kAlgebraicTol, id.similarity);
    led.hold("nonmetricity_identity", kFirstDerivativeTol, id.nonmetricity_identity);
    led.hold("levi_civita_compatible", kFirstDerivativeTol, id.levi_civita_compatibility);
    led.hold("levi_civita_symmetric", kAlgebraicTol, id.levi_civita_symmetry);
    led.hold("commutator_criterion", 0.0, id.corollary_consistent ? 0.0 : 1.0);

    double frame_gap = 0.0;
    for (int m = 0; m < pg.raw.dim(); ++m) frame_gap = std::max(frame_gap, max_abs(pg.lambda[m] - pg.raw[m]));
    if (s.coincidence_expected)
      led.hold("compensation_equals_raw", kFirstDerivativeTol, frame_gap);
    else if (id.max_commutator > 1e-6)
      led.separate("compensation_equals_raw", kFirstDerivativeTol, frame_gap);
  }

  VerificationReport report;
  report.scenario = s.name;
  report.resolution = resolution;
  report.scheme = scheme;
  report.points = points;
  led.finish(report);
  return report;
}

}  // namespace defgeo
