#include "defgeo/pipeline.hpp"

#include <Eigen/LU>

namespace defgeo {

DeformedGeometry::DeformedGeometry(DeformationField P) : P_(std::move(P)), g_(deformed_metric_field(P_)) {}

PointGeometry DeformedGeometry::evaluate(const ChartPoint& p, const DifferentiationScheme& scheme,
                                         bool with_curvature) const {
  scheme.validate();
  chart().require_usable(p, "geometry evaluation");
  const Matrix Pm = P_(p);
  const Matrix gbar = reference().components()(p);
  MetricAtPoint g = deformed_metric(P_, reference(), p);
  std::vector<Matrix> dg = metric_partials(g_, p, scheme);

  ConnectionCoefficients gamma_bar = christoffel(reference(), p, scheme);
  ConnectionCoefficients gamma0{christoffel_from_partials(g, dg), true};
  RateTensor raw = raw_rate(P_, reference(), p, scheme);
  RateTensor deformed = deformed_frame_rate(Pm, raw);
  RateTensor lambda = sym_g(deformed, g);

  AffineConnection total{{gamma0.values + lambda.as_tensor(), false}, Provenance::Total};
  Tensor3 dev = deviation(total, g_, p, scheme).values;
  Tensor3 tors = torsion(total);
  Tensor3 nabla = covariant_derivative_metric(total.coefficients.values, g, dg);

  std::optional<CurvatureReport> curvature;
  if (with_curvature) curvature = riemann(g_, p, scheme);

  return PointGeometry{p,
                       Pm,
                       gbar,
                       std::move(g),
                       std::move(dg),
                       std::move(gamma_bar),
                       std::move(gamma0),
                       std::move(raw),
                       std::move(deformed),
                       std::move(lambda),
                       std::move(total),
                       std::move(dev),
                       std::move(tors),
                       std::move(nabla),
                       std::move(curvature)};
}

IdentityResiduals identity_residuals(const PointGeometry& pg) {
  IdentityResiduals r;
  const int n = pg.g.dim();
  const Matrix& G = pg.g.matrix();

  r.deviation_equals_lambda = (pg.deviation - pg.lambda.as_tensor()).max_abs();

  const RateTensor again = sym_g(pg.lambda, pg.g);
  Eigen::PartialPivLU<Matrix> lu(pg.P);
  for (int mu = 0; mu < n; ++mu) {
    const Matrix lowered = G * pg.lambda[mu];
    r.lambda_self_adjoint = std::max(r.lambda_self_adjoint, max_abs(lowered - lowered.transpose()));
    r.sym_idempotent = std::max(r.sym_idempotent, max_abs(again[mu] - pg.lambda[mu]));
    const Matrix rest = G * (pg.deformed[mu] - pg.lambda[mu]);
    r.antisymmetric_remainder = std::max(r.antisymmetric_remainder, max_abs(rest + rest.transpose()));
    r.similarity = std::max(r.similarity, max_abs(pg.deformed[mu] - lu.solve(pg.raw[mu] * pg.P)));

    const double comm = max_abs(commutator_defect(pg.raw[mu], pg.P));
    const double diff = max_abs(pg.deformed[mu] - pg.raw[mu]);
    r.max_commutator = std::max(r.max_commutator, comm);
    r.max_frame_difference = std::max(r.max_frame_difference, diff);
    const bool commutes = comm <= 1e-8 * max_abs(pg.raw[mu]) * max_abs(pg.P);
    const bool coincide = diff <= 1e-8;
    if (commutes != coincide) r.corollary_consistent = false;
  }

  // nabla_mu g_{nu rho} + g_{s rho} Lambda^s_{mu nu} + g_{nu s} Lambda^s_{mu rho}
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int rho = 0; rho < n; ++rho) {
        double v = pg.nabla_g(mu, nu, rho);
        for (int s = 0; s < n; ++s) v += G(s, rho) * pg.lambda[mu](s, nu) + G(nu, s) * pg.lambda[mu](s, rho);
        r.nonmetricity_identity = std::max(r.nonmetricity_identity, std::abs(v));
      }

  r.levi_civita_compatibility = covariant_derivative_metric(pg.gamma0.values, pg.g, pg.dg).max_abs();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        r.levi_civita_symmetry = std::max(r.levi_civita_symmetry, std::abs(pg.gamma0(k, i, j) - pg.gamma0(k, j, i)));
  return r;
}

}  // namespace defgeo
