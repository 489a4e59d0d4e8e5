#include "defgeo/fields.hpp"

#include <stdexcept>

namespace defgeo {

std::string to_string(DiffMode mode) {
  switch (mode) {
    case DiffMode::Analytic: return "analytic";
    case DiffMode::Central: return "central";
    case DiffMode::Richardson: return "richardson";
  }
  return "?";
}

DiffMode diff_mode_from_string(const std::string& name) {
  if (name == "analytic") return DiffMode::Analytic;
  if (name == "central" || name == "central_difference") return DiffMode::Central;
  if (name == "richardson") return DiffMode::Richardson;
  throw std::invalid_argument("unknown differentiation scheme '" + name + "'");
}

void DifferentiationScheme::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("differentiation step must be positive");
  if (levels < 1) throw std::invalid_argument("Richardson levels must be at least 1");
}

double DifferentiationScheme::reach(int order, double scale) const {
  if (mode == DiffMode::Analytic) return 0.0;
  const double s = std::max(1.0, std::abs(scale));
  const double inner = step * s;
  if (order <= 1) return inner;
  const double outer = std::sqrt(step) * s;
  return outer + step * (s + outer);
}

namespace {

void check_chart_names(const Chart& chart, const Expr& e) {
  if (e.coordinate_names() != chart.names())
    throw std::invalid_argument("expression coordinates do not match the chart");
}

struct ExprJet {
  Expr value;
  std::vector<Expr> d1;
  std::vector<std::vector<Expr>> d2;

  explicit ExprJet(const Expr& e) : value(e) {
    const int n = static_cast<int>(e.dimension());
    for (int mu = 0; mu < n; ++mu) d1.push_back(symbolic_partial(e, mu));
    d2.assign(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n), e));
    for (int mu = 0; mu < n; ++mu)
      for (int nu = mu; nu < n; ++nu) {
        Expr d = symbolic_partial(d1[static_cast<std::size_t>(mu)], nu);
        d2[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] = d;
        d2[static_cast<std::size_t>(nu)][static_cast<std::size_t>(mu)] = d;
      }
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// ScalarField

ScalarField ScalarField::from_expr(std::shared_ptr<const Chart> chart, const Expr& e) {
  check_chart_names(*chart, e);
  auto jet = std::make_shared<const ExprJet>(e);
  ScalarField f;
  f.chart_ = std::move(chart);
  f.expr_ = e;
  f.value_ = [jet](const ChartPoint& p) { return jet->value.eval(p.coords()); };
  f.d1_ = [jet](const ChartPoint& p, int mu) { return jet->d1.at(static_cast<std::size_t>(mu)).eval(p.coords()); };
  f.d2_ = [jet](const ChartPoint& p, int mu, int nu) {
    return jet->d2.at(static_cast<std::size_t>(mu)).at(static_cast<std::size_t>(nu)).eval(p.coords());
  };
  return f;
}

ScalarField ScalarField::parse(std::shared_ptr<const Chart> chart, const std::string& source) {
  Expr e = defgeo::parse(source, chart->shared_names());
  return from_expr(std::move(chart), e);
}

ScalarField ScalarField::native(std::shared_ptr<const Chart> chart, Value value, Partial d1, Second d2) {
  if (!value) throw std::invalid_argument("scalar field needs an evaluator");
  ScalarField f;
  f.chart_ = std::move(chart);
  f.value_ = std::move(value);
  f.d1_ = std::move(d1);
  f.d2_ = std::move(d2);
  return f;
}

double ScalarField::analytic_partial(const ChartPoint& p, int mu) const {
  if (!d1_) throw NumericalError("scalar field has no analytic partials");
  return d1_(p, mu);
}

double ScalarField::analytic_second_partial(const ChartPoint& p, int mu, int nu) const {
  if (!d2_) throw NumericalError("scalar field has no analytic second partials");
  return d2_(p, mu, nu);
}

// ---------------------------------------------------------------------------
// MatrixField

MatrixField MatrixField::from_exprs(std::shared_ptr<const Chart> chart,
                                    const std::vector<std::vector<Expr>>& entries) {
  const auto n = entries.size();
  if (n != static_cast<std::size_t>(chart->dim()))
    throw std::invalid_argument("matrix field must be square of chart dimension");
  auto jets = std::make_shared<std::vector<ExprJet>>();
  for (const auto& row : entries) {
    if (row.size() != n) throw std::invalid_argument("matrix field must be square of chart dimension");
    for (const auto& e : row) {
      check_chart_names(*chart, e);
      jets->emplace_back(e);
    }
  }
  const int dim = static_cast<int>(n);
  auto fill = [jets, dim](auto&& pick) {
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = pick((*jets)[static_cast<std::size_t>(i * dim + j)]);
    return m;
  };

  MatrixField F;
  F.chart_ = std::move(chart);
  F.n_ = dim;
  F.exprs_ = entries;
  F.value_ = [fill](const ChartPoint& p) {
    return fill([&](const ExprJet& j) { return j.value.eval(p.coords()); });
  };
  F.d1_ = [fill](const ChartPoint& p, int mu) {
    return fill([&](const ExprJet& j) { return j.d1.at(static_cast<std::size_t>(mu)).eval(p.coords()); });
  };
  F.d2_ = [fill](const ChartPoint& p, int mu, int nu) {
    return fill([&](const ExprJet& j) {
      return j.d2.at(static_cast<std::size_t>(mu)).at(static_cast<std::size_t>(nu)).eval(p.coords());
    });
  };
  return F;
}

MatrixField MatrixField::parse(std::shared_ptr<const Chart> chart,
                               const std::vector<std::vector<std::string>>& entries) {
  std::vector<std::vector<Expr>> exprs;
  for (const auto& row : entries) {
    auto& out = exprs.emplace_back();
    for (const auto& src : row) out.push_back(defgeo::parse(src, chart->shared_names()));
  }
  return from_exprs(std::move(chart), exprs);
}

MatrixField MatrixField::native(std::shared_ptr<const Chart> chart, int n, Value value, Partial d1, Second d2) {
  if (!value) throw std::invalid_argument("matrix field needs an evaluator");
  if (n != chart->dim()) throw std::invalid_argument("matrix field must be square of chart dimension");
  MatrixField F;
  F.chart_ = std::move(chart);
  F.n_ = n;
  F.value_ = std::move(value);
  F.d1_ = std::move(d1);
  F.d2_ = std::move(d2);
  return F;
}

MatrixField MatrixField::constant(std::shared_ptr<const Chart> chart, const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw std::invalid_argument("constant matrix field must be square");
  Matrix zero = Matrix::Zero(n, n);
  return native(
      std::move(chart), n, [m](const ChartPoint&) { return m; },
      [zero](const ChartPoint&, int) { return zero; }, [zero](const ChartPoint&, int, int) { return zero; });
}

Matrix MatrixField::analytic_partial(const ChartPoint& p, int mu) const {
  if (!d1_) throw NumericalError("matrix field has no analytic partials");
  return d1_(p, mu);
}

Matrix MatrixField::analytic_second_partial(const ChartPoint& p, int mu, int nu) const {
  if (!d2_) throw NumericalError("matrix field has no analytic second partials");
  return d2_(p, mu, nu);
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

void check_direction(const Chart& chart, int mu) {
  if (mu < 0 || mu >= chart.dim()) throw std::out_of_range("direction index out of range");
}

}  // namespace

double partial_scalar(const ScalarField& f, const ChartPoint& p, int mu, const DifferentiationScheme& scheme) {
  scheme.validate();
  check_direction(f.chart(), mu);
  f.chart().require_usable(p, "partial_scalar");
  if (scheme.mode == DiffMode::Analytic) return f.analytic_partial(p, mu);
  return numeric_partial(f.chart(), f, p, mu, scheme);
}

Matrix partial_matrix(const MatrixField& F, const ChartPoint& p, int mu, const DifferentiationScheme& scheme) {
  scheme.validate();
  check_direction(F.chart(), mu);
  F.chart().require_usable(p, "partial_matrix");
  if (scheme.mode == DiffMode::Analytic) return F.analytic_partial(p, mu);
  return numeric_partial(F.chart(), F, p, mu, scheme);
}

double second_partial_scalar(const ScalarField& f, const ChartPoint& p, int mu, int nu,
                             const DifferentiationScheme& scheme) {
  scheme.validate();
  check_direction(f.chart(), mu);
  check_direction(f.chart(), nu);
  f.chart().require_usable(p, "second_partial_scalar");
  if (scheme.mode == DiffMode::Analytic) return f.analytic_second_partial(p, mu, nu);
  auto inner = [&](const ChartPoint& q) { return numeric_partial(f.chart(), f, q, nu, scheme); };
  return numeric_partial(f.chart(), inner, p, mu, scheme, true);
}

Matrix second_partial_matrix(const MatrixField& F, const ChartPoint& p, int mu, int nu,
                             const DifferentiationScheme& scheme) {
  scheme.validate();
  check_direction(F.chart(), mu);
  check_direction(F.chart(), nu);
  F.chart().require_usable(p, "second_partial_matrix");
  if (scheme.mode == DiffMode::Analytic) return F.analytic_second_partial(p, mu, nu);
  auto inner = [&](const ChartPoint& q) { return numeric_partial(F.chart(), F, q, nu, scheme); };
  return numeric_partial(F.chart(), inner, p, mu, scheme, true);
}

}  // namespace defgeo
