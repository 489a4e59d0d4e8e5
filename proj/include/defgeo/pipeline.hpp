#pragma once

#include <optional>

#include "defgeo/connection.hpp"
#include "defgeo/deformation.hpp"
#include "defgeo/metric_geometry.hpp"

namespace defgeo {

/// Every quantity of the deformation chain at one point:
///   P -> g = P^T gbar P -> Gamma0[g]
///   P -> Lbar -> L -> Lambda -> Gamma = Gamma0[g] + Lambda
struct PointGeometry {
  ChartPoint point;
  Matrix P;
  Matrix gbar;
  MetricAtPoint g;
  std::vector<Matrix> dg;  ///< d_mu g
  ConnectionCoefficients gamma_bar;
  ConnectionCoefficients gamma0;
  RateTensor raw;       ///< Lbar
  RateTensor deformed;  ///< L
  RateTensor lambda;    ///< Lambda
  AffineConnection total;
  Tensor3 deviation;    ///< C
  Tensor3 torsion;
  Tensor3 nabla_g;      ///< nabla_mu g_{nu rho} under the total connection
  std::optional<CurvatureReport> curvature;  ///< of g, when requested
};

/// A reference metric plus pure deformation, with the induced metric field
/// built once.
class DeformedGeometry {
 public:
  explicit DeformedGeometry(DeformationField P);

  const DeformationField& deformation() const { return P_; }
  const MetricField& reference() const { return P_.reference(); }
  const MetricField& metric() const { return g_; }
  const Chart& chart() const { return P_.chart(); }

  PointGeometry evaluate(const ChartPoint& p, const DifferentiationScheme& scheme, bool with_curvature = false) const;

 private:
  DeformationField P_;
  MetricField g_;
};

/// Residuals of the identities every deformed geometry must satisfy.
struct IdentityResiduals {
  double deviation_equals_lambda = 0.0;   ///< |C - Lambda|
  double lambda_self_adjoint = 0.0;       ///< |g Lambda_mu - (g Lambda_mu)^T|
  double sym_idempotent = 0.0;            ///< |sym_g(Lambda) - Lambda|
  double antisymmetric_remainder = 0.0;   ///< |g(L-Lambda) + (g(L-Lambda))^T|
  double nonmetricity_identity = 0.0;     ///< |nabla g + g Lambda + g Lambda|
  double levi_civita_compatibility = 0.0; ///< |nabla0 g|
  double levi_civita_symmetry = 0.0;      ///< |Gamma0 - Gamma0 with mu,nu swapped|
  double similarity = 0.0;                ///< |L - P^-1 Lbar P|
  double max_commutator = 0.0;            ///< max_mu |[Lbar_mu, P]|
  double max_frame_difference = 0.0;      ///< max_mu |L_mu - Lbar_mu|
  /// Corollary consistency: for every mu, |L_mu - Lbar_mu| <= 1e-8 exactly
  /// when |[Lbar_mu, P]| <= 1e-8 |Lbar_mu| |P|.
  bool corollary_consistent = true;
};

IdentityResiduals identity_residuals(const PointGeometry& pg);

}  // namespace defgeo
