#include "defgeo/deformation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <limits>

namespace defgeo {

Tensor3 RateTensor::as_tensor() const {
  const int n = dim();
  Tensor3 t(n);
  for (int mu = 0; mu < n; ++mu)
    for (int rho = 0; rho < n; ++rho)
      for (int nu = 0; nu < n; ++nu) t(rho, mu, nu) = directions[static_cast<std::size_t>(mu)](rho, nu);
  return t;
}

PureDeformationCheck check_pure_deformation(const Matrix& P, const Matrix& gbar) {
  PureDeformationCheck out;
  const Matrix lowered = gbar * P;
  const double scale = max_abs(lowered);
  out.symmetry_defect = scale > 0.0 ? max_abs(lowered - lowered.transpose()) / scale : 0.0;

  Eigen::LLT<Matrix> llt(gbar);
  if (llt.info() != Eigen::Success) {
    out.min_eigenvalue = -1.0;
    return out;
  }
  // gbar = L L^T, E = L^T, so E P E^-1 = E^-T (gbar P) E^-1.
  const Matrix L = llt.matrixL();
  Matrix tmp = L.triangularView<Eigen::Lower>().solve(lowered);
  Matrix sym = L.triangularView<Eigen::Lower>().solve(tmp.transpose()).transpose();
  sym = 0.5 * (sym + sym.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = eig.eigenvalues().minCoeff();
  return out;
}

DeformationField::DeformationField(MatrixField P, MetricField reference)
    : P_(std::move(P)), gbar_(std::move(reference)) {
  if (P_.size() != gbar_.dim() || P_.chart().dim() != gbar_.chart().dim())
    throw std::invalid_argument("deformation and reference metric dimensions differ");
}

void DeformationField::validate(int resolution, double tol) const {
  double worst = 0.0;
  ChartPoint worst_point;
  bool failed = false;
  for (const ChartPoint& p : chart().grid(resolution)) {
    const PureDeformationCheck c = check_pure_deformation(P_(p), gbar_.components()(p));
    const double defect = std::max(c.symmetry_defect, c.min_eigenvalue > 0.0 ? 0.0 : -c.min_eigenvalue);
    if (!c.ok(tol) && (!failed || defect > worst)) {
      failed = true;
      worst = defect;
      worst_point = p;
    }
  }
  if (failed)
    throw ValidationError("deformation field is not gbar-symmetric positive-definite", worst_point.to_string(),
                          worst);
}

MetricAtPoint deformed_metric(const Matrix& P, const Matrix& gbar) {
  const PureDeformationCheck c = check_pure_deformation(P, gbar);
  if (!c.ok()) throw ValidationError("not a pure deformation", "(given matrix)", c.symmetry_defect);
  const Matrix g = P.transpose() * gbar * P;
  return MetricAtPoint(0.5 * (g + g.transpose()));
}

MetricAtPoint deformed_metric(const DeformationField& P, const MetricField& gbar, const ChartPoint& p) {
  const Matrix Pm = P(p);
  const Matrix gb = gbar.components()(p);
  const PureDeformationCheck c = check_pure_deformation(Pm, gb);
  if (!c.ok()) throw ValidationError("not a pure deformation", p.to_string(), c.symmetry_defect);
  const Matrix g = Pm.transpose() * gb * Pm;
  return MetricAtPoint(0.5 * (g + g.transpose()));
}

MetricField deformed_metric_field(const DeformationField& def) {
  const MatrixField P = def.components();
  const MatrixField G = def.reference().components();
  auto sym = [](const Matrix& m) -> Matrix { return 0.5 * (m + m.transpose()); };

  MatrixField::Value value = [P, G, sym](const ChartPoint& p) {
    const Matrix Pm = P(p);
    return sym(Pm.transpose() * G(p) * Pm);
  };
  MatrixField::Partial d1;
  MatrixField::Second d2;
  if (P.has_analytic_partials() && G.has_analytic_partials()) {
    d1 = [P, G, sym](const ChartPoint& p, int mu) {
      const Matrix A = P(p), B = G(p);
      const Matrix dA = P.analytic_partial(p, mu), dB = G.analytic_partial(p, mu);
      return sym(dA.transpose() * B * A + A.transpose() * dB * A + A.transpose() * B * dA);
    };
  }
  if (P.has_analytic_second_partials() && G.has_analytic_second_partials()) {
    d2 = [P, G, sym](const ChartPoint& p, int mu, int nu) {
      const Matrix A = P(p), B = G(p);
      const Matrix Am = P.analytic_partial(p, mu), An = P.analytic_partial(p, nu);
      const Matrix Bm = G.analytic_partial(p, mu), Bn = G.analytic_partial(p, nu);
      const Matrix Amn = P.analytic_second_partial(p, mu, nu), Bmn = G.analytic_second_partial(p, mu, nu);
      const Matrix At = A.transpose();
      Matrix out = Amn.transpose() * B * A + At * Bmn * A + At * B * Amn;
      out += Am.transpose() * Bn * A + An.transpose() * Bm * A;
      out += Am.transpose() * B * An + An.transpose() * B * Am;
      out += At * Bm * An + At * Bn * Am;
      return sym(out);
    };
  }
  return MetricField(MatrixField::native(P.shared_chart(), P.size(), value, d1, d2));
}

namespace {

// P = W diag(lambda) W^-1 with gbar = E^T E, S = E^-T g E^-1 = V diag(lambda^2) V^T, W = E^-1 V.
struct SquareRoot {
  Matrix P, W, Winv;
  Vector lambda;
  double condition_number = 0.0;
};

SquareRoot square_root(const Matrix& gbar, const Matrix& g) {
  Eigen::LLT<Matrix> llt(gbar);
  if (llt.info() != Eigen::Success) throw RecoveryError("reference metric is not positive-definite", 0.0);
  const Matrix L = llt.matrixL();  // gbar = L L^T = E^T E with E = L^T
  const Matrix E = L.transpose();

  // S = E^-T g E^-1 = L^-1 g L^-T
  Matrix S = L.triangularView<Eigen::Lower>().solve(g);
  S = L.triangularView<Eigen::Lower>().solve(S.transpose()).transpose();
  S = 0.5 * (S + S.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
  const Vector mu = eig.eigenvalues();
  SquareRoot r;
  r.condition_number = mu.minCoeff() > 0.0 ? mu.maxCoeff() / mu.minCoeff() : std::numeric_limits<double>::infinity();
  if (mu.minCoeff() <= 0.0) throw RecoveryError("deformed metric is not positive-definite", r.condition_number);

  const Matrix& V = eig.eigenvectors();
  r.lambda = mu.cwiseSqrt();
  r.W = E.triangularView<Eigen::Upper>().solve(V);
  r.Winv = V.transpose() * E;
  r.P = r.W * r.lambda.asDiagonal() * r.Winv;
  return r;
}

// Solves P X + X P = rhs in the eigenbasis of P.
Matrix sylvester(const SquareRoot& r, const Matrix& rhs) {
  Matrix Y = r.Winv * rhs * r.W;
  for (int i = 0; i < Y.rows(); ++i)
    for (int j = 0; j < Y.cols(); ++j) Y(i, j) /= r.lambda(i) + r.lambda(j);
  return r.W * Y * r.Winv;
}

}  // namespace

Recovery recover_deformation_report(const MetricAtPoint& gbar, const MetricAtPoint& g) {
  if (g.dim() != gbar.dim()) throw std::invalid_argument("metrics have different dimensions");
  const SquareRoot root = square_root(gbar.matrix(), g.matrix());
  Recovery out;
  out.P = root.P;
  out.condition_number = root.condition_number;

  const Matrix rebuilt = out.P.transpose() * gbar.matrix() * out.P;
  out.residual = max_abs(rebuilt - g.matrix()) / max_abs(g.matrix());
  if (out.residual > 1e-9)
    throw RecoveryError("reconstruction residual " + std::to_string(out.residual) + " exceeds tolerance",
                        out.condition_number);
  const Matrix lowered = gbar.matrix() * out.P;
  if (max_abs(lowered - lowered.transpose()) > 1e-9 * max_abs(lowered))
    throw RecoveryError("recovered deformation is not gbar-symmetric", out.condition_number);
  return out;
}

DeformationField recovered_deformation_field(const MetricField& gbar, const MetricField& g) {
  if (!gbar.chart().same_as(g.chart()) || gbar.dim() != g.dim())
    throw std::invalid_argument("recovery needs both metrics on the same chart");
  const MatrixField& B = gbar.components();
  const MatrixField& G = g.components();
  auto value = [gbar, g](const ChartPoint& p) { return recover_deformation(gbar.at(p), g.at(p)); };

  // With M = gbar^-1 g = P^2:
  //   d_m M = gbar^-1 (d_m g - d_m gbar M)
  //   d_mn M = gbar^-1 (d_mn g - d_mn gbar M - d_m gbar d_n M - d_n gbar d_m M)
  //   P d_m P + d_m P P = d_m M
  //   P d_mn P + d_mn P P = d_mn M - d_m P d_n P - d_n P d_m P
  MatrixField::Partial d1;
  MatrixField::Second d2;
  if (B.has_analytic_partials() && G.has_analytic_partials()) {
    d1 = [B, G](const ChartPoint& p, int m) {
      const Matrix b = B(p);
      const SquareRoot r = square_root(b, G(p));
      Eigen::LLT<Matrix> bl(b);
      const Matrix M = bl.solve(G(p));
      return sylvester(r, bl.solve(G.analytic_partial(p, m) - B.analytic_partial(p, m) * M));
    };
  }
  if (d1 && B.has_analytic_second_partials() && G.has_analytic_second_partials()) {
    d2 = [B, G](const ChartPoint& p, int m, int n) {
      const Matrix b = B(p);
      const SquareRoot r = square_root(b, G(p));
      Eigen::LLT<Matrix> bl(b);
      const Matrix M = bl.solve(G(p));
      const Matrix Bm = B.analytic_partial(p, m), Bn = B.analytic_partial(p, n);
      const Matrix Mm = bl.solve(G.analytic_partial(p, m) - Bm * M);
      const Matrix Mn = bl.solve(G.analytic_partial(p, n) - Bn * M);
      const Matrix Mmn = bl.solve(G.analytic_second_partial(p, m, n) - B.analytic_second_partial(p, m, n) * M -
                                  Bm * Mn - Bn * Mm);
      const Matrix Pm = sylvester(r, Mm), Pn = sylvester(r, Mn);
      return sylvester(r, Mmn - Pm * Pn - Pn * Pm);
    };
  }
  return DeformationField(MatrixField::native(B.shared_chart(), B.size(), value, d1, d2), gbar);
}

Matrix recover_deformation(const MetricAtPoint& gbar, const MetricAtPoint& g) {
  return recover_deformation_report(gbar, g).P;
}

RateTensor raw_rate(const DeformationField& P, const MetricField& gbar, const ChartPoint& p,
                    const DifferentiationScheme& scheme) {
  const int n = P.dim();
  const Matrix Pm = P(p);
  Eigen::PartialPivLU<Matrix> lu(Pm);
  if (std::abs(lu.determinant()) <= 1e-300) throw NumericalError("deformation is singular at " + p.to_string());

  const ConnectionCoefficients gbar_gamma = christoffel(gbar, p, scheme);
  RateTensor out;
  out.kind = RateKind::Raw;
  for (int mu = 0; mu < n; ++mu) {
    Matrix gamma_mu(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) gamma_mu(a, b) = gbar_gamma(a, mu, b);
    const Matrix nabla = partial_matrix(P.components(), p, mu, scheme) + gamma_mu * Pm - Pm * gamma_mu;
    out.directions.push_back(lu.solve(nabla));
  }
  return out;
}

RateTensor deformed_frame_rate(const Matrix& P, const RateTensor& raw) {
  Eigen::PartialPivLU<Matrix> lu(P);
  if (std::abs(lu.determinant()) <= 1e-300) throw NumericalError("deformation is singular");
  RateTensor out;
  out.kind = RateKind::DeformedFrame;
  for (const Matrix& m : raw.directions) out.directions.push_back(lu.solve(m * P));
  return out;
}

Matrix commutator_defect(const Matrix& raw_mu, const Matrix& P) {
  if (raw_mu.rows() != P.rows() || raw_mu.cols() != P.cols())
    throw std::invalid_argument("commutator of matrices with different shapes");
  return raw_mu * P - P * raw_mu;
}

}  // namespace defgeo
