#include "defgeo/metric_geometry.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace defgeo {

MetricAtPoint::MetricAtPoint(const Matrix& g) {
  const int n = static_cast<int>(g.rows());
  if (n == 0 || g.cols() != n) throw SingularMetricError("metric must be a non-empty square matrix");
  if (!g.allFinite()) throw SingularMetricError("metric has non-finite entries");
  const double scale = max_abs(g);
  if (max_abs(g - g.transpose()) > 1e-12 * scale) throw SingularMetricError("metric is not symmetric");
  g_ = 0.5 * (g + g.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(g_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= 0.0) throw SingularMetricError("metric is not positive-definite");
  det_ = eig.eigenvalues().prod();
  if (det_ < 1e-12 * std::pow(scale, n)) throw SingularMetricError("metric is degenerate (determinant too small)");

  Eigen::LLT<Matrix> llt(g_);
  inv_ = llt.solve(Matrix::Identity(n, n));
  inv_ = 0.5 * (inv_ + inv_.transpose());
  if (max_abs(g_ * inv_ - Matrix::Identity(n, n)) > 1e-10)
    throw SingularMetricError("metric inverse failed the identity check");
}

Tensor3 christoffel_from_partials(const MetricAtPoint& g, const std::vector<Matrix>& dg) {
  const int n = g.dim();
  const Matrix& ginv = g.inverse();
  // first[l][i][j] = d_i g_lj + d_j g_li - d_l g_ij
  Tensor3 first(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) first(l, i, j) = dg[i](l, j) + dg[j](l, i) - dg[l](i, j);

  Tensor3 gamma(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv(k, l) * first(l, i, j);
        gamma(k, i, j) = 0.5 * s;
      }
  return gamma;
}

std::vector<Matrix> metric_partials(const MetricField& metric, const ChartPoint& p,
                                    const DifferentiationScheme& scheme) {
  std::vector<Matrix> dg;
  for (int mu = 0; mu < metric.dim(); ++mu) dg.push_back(partial_matrix(metric.components(), p, mu, scheme));
  return dg;
}

ConnectionCoefficients christoffel(const MetricField& metric, const ChartPoint& p,
                                   const DifferentiationScheme& scheme) {
  const MetricAtPoint g = metric.at(p);
  return {christoffel_from_partials(g, metric_partials(metric, p, scheme)), true};
}

namespace {

// d_s Gamma^k_ij for every s, from exact first and second metric partials.
std::vector<Tensor3> analytic_christoffel_partials(const MetricField& metric, const ChartPoint& p,
                                                   const MetricAtPoint& g, const std::vector<Matrix>& dg) {
  const int n = g.dim();
  const Matrix& ginv = g.inverse();
  const MatrixField& G = metric.components();

  std::vector<std::vector<Matrix>> ddg(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) ddg[static_cast<std::size_t>(a)].push_back(G.analytic_second_partial(p, a, b));

  Tensor3 first(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) first(l, i, j) = dg[i](l, j) + dg[j](l, i) - dg[l](i, j);

  std::vector<Tensor3> out;
  for (int s = 0; s < n; ++s) {
    const auto& dds = ddg[static_cast<std::size_t>(s)];
    const Matrix dginv = -ginv * dg[s] * ginv;
    Tensor3 d(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l) {
            const double dfirst = dds[i](l, j) + dds[j](l, i) - dds[l](i, j);
            acc += dginv(k, l) * first(l, i, j) + ginv(k, l) * dfirst;
          }
          d(k, i, j) = 0.5 * acc;
        }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

CurvatureReport riemann(const MetricField& metric, const ChartPoint& p, const DifferentiationScheme& scheme) {
  const int n = metric.dim();
  const MetricAtPoint g = metric.at(p);
  const std::vector<Matrix> dg = metric_partials(metric, p, scheme);
  const Tensor3 gamma = christoffel_from_partials(g, dg);

  std::vector<Tensor3> dgamma;
  if (scheme.mode == DiffMode::Analytic) {
    dgamma = analytic_christoffel_partials(metric, p, g, dg);
  } else {
    auto gamma_at = [&](const ChartPoint& q) { return christoffel(metric, q, scheme).values; };
    for (int s = 0; s < n; ++s) dgamma.push_back(numeric_partial(metric.chart(), gamma_at, p, s, scheme, true));
  }

  CurvatureReport rep;
  rep.riemann = Tensor4(n);
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s)
      for (int m = 0; m < n; ++m)
        for (int v = 0; v < n; ++v) {
          double val = dgamma[m](r, v, s) - dgamma[v](r, m, s);
          for (int l = 0; l < n; ++l) val += gamma(r, m, l) * gamma(l, v, s) - gamma(r, v, l) * gamma(l, m, s);
          rep.riemann(r, s, m, v) = val;
        }

  rep.ricci = Matrix::Zero(n, n);
  for (int s = 0; s < n; ++s)
    for (int v = 0; v < n; ++v)
      for (int r = 0; r < n; ++r) rep.ricci(s, v) += rep.riemann(r, s, r, v);

  rep.scalar = (g.inverse().cwiseProduct(rep.ricci)).sum();
  if (n == 2) rep.gaussian = rep.scalar / 2.0;
  return rep;
}

double laplace_beltrami(const MetricField& metric, const ScalarField& f, const ChartPoint& p,
                        const DifferentiationScheme& scheme) {
  const int n = metric.dim();
  if (f.chart().dim() != n) throw std::invalid_argument("scalar field and metric live on different charts");

  if (scheme.mode == DiffMode::Analytic) {
    // g^{mu nu} f_{,mu nu} + (d_mu g^{mu nu}) f_{,nu} + (1/2) tr(g^-1 d_mu g) g^{mu nu} f_{,nu}
    const MetricAtPoint g = metric.at(p);
    const Matrix& ginv = g.inverse();
    const std::vector<Matrix> dg = metric_partials(metric, p, scheme);
    Vector df(n);
    for (int nu = 0; nu < n; ++nu) df(nu) = partial_scalar(f, p, nu, scheme);
    double out = 0.0;
    for (int mu = 0; mu < n; ++mu) {
      const Matrix dginv = -ginv * dg[mu] * ginv;
      const double dlog_sqrt_det = 0.5 * (ginv * dg[mu]).trace();
      for (int nu = 0; nu < n; ++nu) {
        out += ginv(mu, nu) * second_partial_scalar(f, p, mu, nu, scheme);
        out += dginv(mu, nu) * df(nu);
        out += dlog_sqrt_det * ginv(mu, nu) * df(nu);
      }
    }
    return out;
  }

  auto flux = [&](const ChartPoint& q) {
    const MetricAtPoint g = metric.at(q);
    Vector df(n);
    for (int nu = 0; nu < n; ++nu) df(nu) = partial_scalar(f, q, nu, scheme);
    Vector v = std::sqrt(g.determinant()) * (g.inverse() * df);
    return v;
  };
  const MetricAtPoint g = metric.at(p);
  double div = 0.0;
  for (int mu = 0; mu < n; ++mu) div += numeric_partial(metric.chart(), flux, p, mu, scheme, true)(mu);
  return div / std::sqrt(g.determinant());
}

}  // namespace defgeo
