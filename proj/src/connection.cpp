#include "defgeo/connection.hpp"

namespace defgeo {

RateTensor sym_g(const RateTensor& L, const MetricAtPoint& g) {
  if (L.dim() != g.dim()) throw std::invalid_argument("rate tensor and metric dimensions differ");
  RateTensor out;
  out.kind = RateKind::Compensation;
  const Matrix& G = g.matrix();
  const Matrix& Ginv = g.inverse();
  for (const Matrix& m : L.directions) out.directions.push_back(0.5 * (m + Ginv * m.transpose() * G));
  return out;
}

AffineConnection total_connection(const MetricField& g, const RateTensor& lambda, const ChartPoint& p,
                                  const DifferentiationScheme& scheme) {
  ConnectionCoefficients lc = christoffel(g, p, scheme);
  lc.values += lambda.as_tensor();
  lc.levi_civita = false;
  return {std::move(lc), Provenance::Total};
}

ConnectionCoefficients deviation(const AffineConnection& gamma, const MetricField& g, const ChartPoint& p,
                                 const DifferentiationScheme& scheme) {
  const ConnectionCoefficients lc = christoffel(g, p, scheme);
  return {gamma.coefficients.values - lc.values, false};
}

Tensor3 covariant_derivative_metric(const Tensor3& gamma, const MetricAtPoint& g, const std::vector<Matrix>& dg) {
  const int n = g.dim();
  const Matrix& G = g.matrix();
  Tensor3 out(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int rho = 0; rho < n; ++rho) {
        double v = dg[mu](nu, rho);
        for (int s = 0; s < n; ++s) v -= gamma(s, mu, nu) * G(s, rho) + gamma(s, mu, rho) * G(nu, s);
        out(mu, nu, rho) = v;
      }
  return out;
}

Tensor3 covariant_derivative_metric(const AffineConnection& gamma, const MetricField& g, const ChartPoint& p,
                                    const DifferentiationScheme& scheme) {
  return covariant_derivative_metric(gamma.coefficients.values, g.at(p), metric_partials(g, p, scheme));
}

Tensor3 nonmetricity(const AffineConnection& gamma, const MetricField& g, const ChartPoint& p,
                     const DifferentiationScheme& scheme) {
  return -1.0 * covariant_derivative_metric(gamma, g, p, scheme);
}

Tensor3 torsion(const AffineConnection& gamma) {
  const int n = gamma.dim();
  Tensor3 t(n);
  for (int r = 0; r < n; ++r)
    for (int m = 0; m < n; ++m)
      for (int v = 0; v < n; ++v) t(r, m, v) = gamma(r, m, v) - gamma(r, v, m);
  return t;
}

}  // namespace defgeo
