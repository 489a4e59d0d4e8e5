#pragma once

#include <vector>

#include "defgeo/fields.hpp"
#include "defgeo/metric_geometry.hpp"

namespace defgeo {

enum class RateKind { Raw, DeformedFrame, Compensation };

/// A per-direction family of n x n matrices X_mu with X_mu(rho, nu) holding
/// X^rho_{mu nu}. Used for the raw rate, the deformed-frame rate and the
/// compensation tensor.
struct RateTensor {
  std::vector<Matrix> directions;
  RateKind kind = RateKind::Raw;

  int dim() const { return static_cast<int>(directions.size()); }
  const Matrix& operator[](int mu) const { return directions[static_cast<std::size_t>(mu)]; }

  /// Components as Tensor3 (rho, mu, nu).
  Tensor3 as_tensor() const;
};

/// Outcome of the pure-deformation test at one point.
struct PureDeformationCheck {
  double symmetry_defect = 0.0;  ///< |gbar P - (gbar P)^T|_max / |gbar P|_max
  double min_eigenvalue = 0.0;   ///< smallest eigenvalue of E P E^-1, gbar = E^T E
  bool ok(double tol = 1e-10) const { return symmetry_defect <= tol && min_eigenvalue > 0.0; }
};

PureDeformationCheck check_pure_deformation(const Matrix& P, const Matrix& gbar);

/// A pure deformation P^mu_nu relative to a reference metric: gbar-symmetric
/// and positive-definite at every point.
class DeformationField {
 public:
  DeformationField(MatrixField P, MetricField reference);

  const MatrixField& components() const { return P_; }
  const MetricField& reference() const { return gbar_; }
  const Chart& chart() const { return P_.chart(); }
  int dim() const { return P_.size(); }

  Matrix operator()(const ChartPoint& p) const { return P_(p); }

  /// Samples resolution^n grid points over the validity box and throws
  /// ValidationError with the worst point unless every sample passes.
  void validate(int resolution = 11, double tol = 1e-10) const;

 private:
  MatrixField P_;
  MetricField gbar_;
};

/// g = P^T gbar P at one point. Throws ValidationError if P is not a pure
/// deformation there.
MetricAtPoint deformed_metric(const DeformationField& P, const MetricField& gbar, const ChartPoint& p);
MetricAtPoint deformed_metric(const Matrix& P, const Matrix& gbar);

/// The field g = P^T gbar P, with exact partials (product rule) whenever
/// both P and gbar carry them.
MetricField deformed_metric_field(const DeformationField& P);

struct Recovery {
  Matrix P;
  double residual = 0.0;          ///< |P^T gbar P - g|_max / |g|_max
  double condition_number = 0.0;  ///< of S = E^-T g E^-1
};

/// The unique gbar-symmetric positive-definite P with P^T gbar P = g.
/// gbar = E^T E (Cholesky), S = E^-T g E^-1 = E (gbar^-1 g) E^-1,
/// P = E^-1 S^{1/2} E with S^{1/2} from the spectral decomposition.
/// Throws RecoveryError if the reconstruction or symmetry check fails.
Recovery recover_deformation_report(const MetricAtPoint& gbar, const MetricAtPoint& g);
Matrix recover_deformation(const MetricAtPoint& gbar, const MetricAtPoint& g);

/// The deformation field recovered pointwise from a metric pair. Exact first
/// and second partials (from P dP + dP P = d(gbar^-1 g)) are attached when
/// both metrics carry them.
DeformationField recovered_deformation_field(const MetricField& gbar, const MetricField& g);

/// Lbar_mu = P^-1 (d_mu P + Gammabar_mu P - P Gammabar_mu), where
/// (Gammabar_mu)(a, b) = Gammabar^a_{mu b}.
RateTensor raw_rate(const DeformationField& P, const MetricField& gbar, const ChartPoint& p,
                    const DifferentiationScheme& scheme);

/// L_mu = P^-1 Lbar_mu P.
RateTensor deformed_frame_rate(const Matrix& P, const RateTensor& raw);

/// [Lbar_mu, P] = Lbar_mu P - P Lbar_mu; zero exactly when L_mu = Lbar_mu.
Matrix commutator_defect(const Matrix& raw_mu, const Matrix& P);

}  // namespace defgeo
