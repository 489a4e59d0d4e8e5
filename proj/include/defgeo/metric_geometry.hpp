#pragma once

#include <optional>
#include <vector>

#include "defgeo/fields.hpp"
#include "defgeo/tensor.hpp"

namespace defgeo {

/// A validated symmetric positive-definite metric at one point, with its
/// inverse and determinant cached.
class MetricAtPoint {
 public:
  /// Throws SingularMetricError for asymmetric, indefinite or (near-)singular
  /// input. The stored matrix is the symmetrized input.
  explicit MetricAtPoint(const Matrix& g);

  int dim() const { return static_cast<int>(g_.rows()); }
  const Matrix& matrix() const { return g_; }
  const Matrix& inverse() const { return inv_; }
  double determinant() const { return det_; }

 private:
  Matrix g_;
  Matrix inv_;
  double det_ = 0.0;
};

/// A metric tensor field: symmetric positive-definite component matrices.
class MetricField {
 public:
  explicit MetricField(MatrixField components) : components_(std::move(components)) {}

  const MatrixField& components() const { return components_; }
  const Chart& chart() const { return components_.chart(); }
  int dim() const { return components_.size(); }

  MetricAtPoint at(const ChartPoint& p) const { return MetricAtPoint(components_(p)); }

 private:
  MatrixField components_;
};

/// Gamma^rho_{mu nu} stored as Tensor3 (rho, mu, nu).
struct ConnectionCoefficients {
  Tensor3 values;
  bool levi_civita = false;

  int dim() const { return values.dim(); }
  double operator()(int rho, int mu, int nu) const { return values(rho, mu, nu); }
};

struct CurvatureReport {
  Tensor4 riemann;  ///< R^rho_{sigma mu nu}, index order (rho, sigma, mu, nu)
  Matrix ricci;     ///< R_{sigma nu} = R^rho_{sigma rho nu}
  double scalar = 0.0;
  std::optional<double> gaussian;  ///< scalar / 2, only in two dimensions
};

/// Levi-Civita coefficients from the metric and its first partials
/// (`dg[k]` = d_k g).
Tensor3 christoffel_from_partials(const MetricAtPoint& g, const std::vector<Matrix>& dg);

/// All first partials d_mu g at p under the scheme.
std::vector<Matrix> metric_partials(const MetricField& metric, const ChartPoint& p,
                                    const DifferentiationScheme& scheme);

ConnectionCoefficients christoffel(const MetricField& metric, const ChartPoint& p,
                                   const DifferentiationScheme& scheme);

/// R^rho_{sigma mu nu} = d_mu Gamma^rho_{nu sigma} - d_nu Gamma^rho_{mu sigma}
///                     + Gamma^rho_{mu lambda} Gamma^lambda_{nu sigma}
///                     - Gamma^rho_{nu lambda} Gamma^lambda_{mu sigma}.
/// Analytic mode differentiates Gamma exactly from second metric partials;
/// finite-difference modes difference Gamma with the outer step.
CurvatureReport riemann(const MetricField& metric, const ChartPoint& p, const DifferentiationScheme& scheme);

/// Delta f = |g|^{-1/2} d_mu (|g|^{1/2} g^{mu nu} d_nu f).
double laplace_beltrami(const MetricField& metric, const ScalarField& f, const ChartPoint& p,
                        const DifferentiationScheme& scheme);

}  // namespace defgeo
