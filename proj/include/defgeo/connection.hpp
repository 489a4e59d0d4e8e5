#pragma once

#include "defgeo/deformation.hpp"
#include "defgeo/metric_geometry.hpp"

namespace defgeo {

enum class Provenance { Reference, LeviCivitaDeformed, Total, Custom };

struct AffineConnection {
  ConnectionCoefficients coefficients;
  Provenance provenance = Provenance::Custom;

  int dim() const { return coefficients.dim(); }
  double operator()(int rho, int mu, int nu) const { return coefficients(rho, mu, nu); }
};

/// Lambda_mu = (L_mu + g^-1 L_mu^T g) / 2, i.e.
/// Lambda^rho_{mu nu} = (L^rho_{mu nu} + g^{rho lambda} g_{nu sigma} L^sigma_{mu lambda}) / 2.
/// The result is g-self-adjoint per direction.
RateTensor sym_g(const RateTensor& L, const MetricAtPoint& g);

/// Gamma = Gamma0[g] + Lambda.
AffineConnection total_connection(const MetricField& g, const RateTensor& lambda, const ChartPoint& p,
                                  const DifferentiationScheme& scheme);

/// C = Gamma - Gamma0[g].
ConnectionCoefficients deviation(const AffineConnection& gamma, const MetricField& g, const ChartPoint& p,
                                 const DifferentiationScheme& scheme);

/// nabla_mu g_{nu rho} = d_mu g_{nu rho} - Gamma^s_{mu nu} g_{s rho} - Gamma^s_{mu rho} g_{nu s},
/// as Tensor3 (mu, nu, rho).
Tensor3 covariant_derivative_metric(const AffineConnection& gamma, const MetricField& g, const ChartPoint& p,
                                    const DifferentiationScheme& scheme);
Tensor3 covariant_derivative_metric(const Tensor3& gamma, const MetricAtPoint& g, const std::vector<Matrix>& dg);

/// Q_{mu nu rho} = -nabla_mu g_{nu rho}.
Tensor3 nonmetricity(const AffineConnection& gamma, const MetricField& g, const ChartPoint& p,
                     const DifferentiationScheme& scheme);

/// T^rho_{mu nu} = Gamma^rho_{mu nu} - Gamma^rho_{nu mu}.
Tensor3 torsion(const AffineConnection& gamma);

}  // namespace defgeo
