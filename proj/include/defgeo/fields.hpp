#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "defgeo/chart.hpp"
#include "defgeo/errors.hpp"
#include "defgeo/expr.hpp"
#include "defgeo/tensor.hpp"

namespace defgeo {

enum class DiffMode { Analytic, Central, Richardson };

std::string to_string(DiffMode mode);
DiffMode diff_mode_from_string(const std::string& name);

/// How partial derivatives are taken.
///
/// Finite-difference steps are relative: along direction mu at point p the
/// step is `step * max(1, |p_mu|)`. Richardson uses the steps h, h/2, ...,
/// h/2^(levels-1) and eliminates even error terms; levels = 2 gives
/// (4 D_{h/2} - D_h) / 3, levels = 1 is a plain central difference.
/// Nested derivatives (curvature, Laplacian) use an outer step of
/// sqrt(step) * max(1, |p_mu|).
struct DifferentiationScheme {
  DiffMode mode = DiffMode::Analytic;
  double step = 1e-5;
  int levels = 2;

  static DifferentiationScheme analytic() { return {}; }
  static DifferentiationScheme central(double h = 1e-5) { return {DiffMode::Central, h, 1}; }
  static DifferentiationScheme richardson(double h = 1e-5, int levels = 2) {
    return {DiffMode::Richardson, h, levels};
  }

  void validate() const;

  double step_at(const ChartPoint& p, int mu) const { return step * std::max(1.0, std::abs(p[mu])); }
  double outer_step_at(const ChartPoint& p, int mu) const {
    return std::sqrt(step) * std::max(1.0, std::abs(p[mu]));
  }
  int effective_levels() const { return mode == DiffMode::Richardson ? levels : 1; }

  /// Largest coordinate displacement a first (order 1) or nested (order 2)
  /// derivative stencil may reach from a point with |p_mu| <= scale.
  double reach(int order, double scale) const;
};

/// Central difference of `f` along `mu` at `p` with Richardson refinement.
/// Works for any value type with +, - and scalar multiplication (double,
/// Eigen matrices, Tensor3). Every stencil point is checked against `chart`.
template <class F>
auto finite_difference(const Chart& chart, const F& f, const ChartPoint& p, int mu, double h, int levels)
    -> std::decay_t<decltype(f(p))> {
  using R = std::decay_t<decltype(f(p))>;
  const ChartPoint far_plus = p.shifted(mu, h);
  const ChartPoint far_minus = p.shifted(mu, -h);
  chart.require_usable(far_plus, "finite-difference stencil");
  chart.require_usable(far_minus, "finite-difference stencil");

  // Row k of the extrapolation table: T(k, 0) = D(h / 2^k),
  // T(k, j) = T(k, j-1) + (T(k, j-1) - T(k-1, j-1)) / (4^j - 1).
  std::vector<R> prev, row;
  double hk = h;
  for (int k = 0; k < levels; ++k, hk *= 0.5) {
    row.clear();
    R d = (f(p.shifted(mu, hk)) - f(p.shifted(mu, -hk))) * (0.5 / hk);
    row.push_back(std::move(d));
    double factor = 4.0;
    for (std::size_t j = 1; j <= static_cast<std::size_t>(k); ++j, factor *= 4.0) {
      R next = row[j - 1] + (row[j - 1] - prev[j - 1]) * (1.0 / (factor - 1.0));
      row.push_back(std::move(next));
    }
    std::swap(prev, row);
  }
  return prev.back();
}

/// A real-valued field on a chart. Expression-backed fields carry exact
/// first and second partials; native fields may supply their own.
class ScalarField {
 public:
  using Value = std::function<double(const ChartPoint&)>;
  using Partial = std::function<double(const ChartPoint&, int)>;
  using Second = std::function<double(const ChartPoint&, int, int)>;

  static ScalarField from_expr(std::shared_ptr<const Chart> chart, const Expr& e);
  static ScalarField parse(std::shared_ptr<const Chart> chart, const std::string& source);
  static ScalarField native(std::shared_ptr<const Chart> chart, Value value, Partial d1 = {},
                            Second d2 = {});

  const Chart& chart() const { return *chart_; }
  const std::shared_ptr<const Chart>& shared_chart() const { return chart_; }
  double operator()(const ChartPoint& p) const { return value_(p); }

  bool has_analytic_partials() const { return static_cast<bool>(d1_); }
  bool has_analytic_second_partials() const { return static_cast<bool>(d2_); }
  double analytic_partial(const ChartPoint& p, int mu) const;
  double analytic_second_partial(const ChartPoint& p, int mu, int nu) const;

  /// The backing expression, when there is one.
  const std::optional<Expr>& expression() const { return expr_; }

 private:
  ScalarField() = default;

  std::shared_ptr<const Chart> chart_;
  Value value_;
  Partial d1_;
  Second d2_;
  std::optional<Expr> expr_;
};

/// A field of n x n matrices on a chart (metric components, deformation
/// components). Same analytic-partial conventions as ScalarField.
class MatrixField {
 public:
  using Value = std::function<Matrix(const ChartPoint&)>;
  using Partial = std::function<Matrix(const ChartPoint&, int)>;
  using Second = std::function<Matrix(const ChartPoint&, int, int)>;

  /// Entries given row-major as expressions over the chart's coordinates.
  static MatrixField from_exprs(std::shared_ptr<const Chart> chart, const std::vector<std::vector<Expr>>& entries);
  static MatrixField parse(std::shared_ptr<const Chart> chart, const std::vector<std::vector<std::string>>& entries);
  static MatrixField native(std::shared_ptr<const Chart> chart, int n, Value value, Partial d1 = {},
                            Second d2 = {});
  static MatrixField constant(std::shared_ptr<const Chart> chart, const Matrix& m);

  const Chart& chart() const { return *chart_; }
  const std::shared_ptr<const Chart>& shared_chart() const { return chart_; }
  int size() const { return n_; }
  Matrix operator()(const ChartPoint& p) const { return value_(p); }

  bool has_analytic_partials() const { return static_cast<bool>(d1_); }
  bool has_analytic_second_partials() const { return static_cast<bool>(d2_); }
  Matrix analytic_partial(const ChartPoint& p, int mu) const;
  Matrix analytic_second_partial(const ChartPoint& p, int mu, int nu) const;

  /// Row-major entry expressions, when expression-backed.
  const std::optional<std::vector<std::vector<Expr>>>& expressions() const { return exprs_; }

 private:
  MatrixField() = default;

  std::shared_ptr<const Chart> chart_;
  int n_ = 0;
  Value value_;
  Partial d1_;
  Second d2_;
  std::optional<std::vector<std::vector<Expr>>> exprs_;
};

double partial_scalar(const ScalarField& f, const ChartPoint& p, int mu, const DifferentiationScheme& scheme);
Matrix partial_matrix(const MatrixField& F, const ChartPoint& p, int mu, const DifferentiationScheme& scheme);

/// d^2 f / dx^mu dx^nu. Finite-difference modes nest an outer difference
/// (outer step) around the inner scheme.
double second_partial_scalar(const ScalarField& f, const ChartPoint& p, int mu, int nu,
                             const DifferentiationScheme& scheme);
Matrix second_partial_matrix(const MatrixField& F, const ChartPoint& p, int mu, int nu,
                             const DifferentiationScheme& scheme);

/// Generic first derivative of any chart function under a non-analytic
/// scheme; `outer` selects the nested outer step.
template <class F>
auto numeric_partial(const Chart& chart, const F& f, const ChartPoint& p, int mu,
                     const DifferentiationScheme& scheme, bool outer = false) {
  if (scheme.mode == DiffMode::Analytic)
    throw std::logic_error("numeric_partial called with the analytic scheme");
  const double h = outer ? scheme.outer_step_at(p, mu) : scheme.step_at(p, mu);
  return finite_difference(chart, f, p, mu, h, scheme.effective_levels());
}

}  // namespace defgeo
