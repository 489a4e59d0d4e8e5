#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "defgeo/deformation.hpp"
#include "defgeo/fields.hpp"
#include "defgeo/pipeline.hpp"

namespace defgeo {

/// One of the built-in example families: chart, reference metric, pure
/// deformation and closed-form values for whatever the family states in
/// closed form. Closed forms are written directly from the family's
/// formulas and share nothing with the generic pipeline.
struct Scenario {
  template <class T>
  using ClosedForm = std::function<T(const ChartPoint&)>;

  Scenario(std::string name, std::shared_ptr<const Chart> chart, DeformationField deformation)
      : name(std::move(name)), chart(std::move(chart)), deformation(std::move(deformation)) {}

  std::string name;
  std::shared_ptr<const Chart> chart;
  DeformationField deformation;

  ClosedForm<Matrix> metric;                ///< g
  ClosedForm<Matrix> inverse_deformation;   ///< P^-1
  ClosedForm<Tensor3> levi_civita;          ///< Gamma0[g]
  ClosedForm<RateTensor> raw_rate;          ///< Lbar
  ClosedForm<RateTensor> raw_dilation;      ///< dilation part of Lbar
  ClosedForm<RateTensor> raw_shear;         ///< shear part of Lbar
  ClosedForm<RateTensor> deformed_rate;     ///< L
  ClosedForm<RateTensor> compensation;      ///< Lambda
  ClosedForm<Tensor3> total_connection;     ///< Gamma
  ClosedForm<double> gaussian_curvature;    ///< K[g]
  ClosedForm<double> homothety_curvature;   ///< K[g] for a constant conformal factor
  ClosedForm<double> reference_laplacian;   ///< Laplace-Beltrami of the conformal factor

  /// The conformal factor, for the Laplace-Beltrami cross-check.
  std::optional<ScalarField> conformal_factor;

  /// True when Lambda = L = Lbar is expected everywhere (diagonal and
  /// conformal families); false when the family exists to break it.
  bool coincidence_expected = true;
};

std::shared_ptr<const Chart> planar_chart(double half_width = 1.0);
/// (theta, phi) with theta in [0.3, pi - 0.3], phi in [0, 2 pi]; the poles
/// are declared as excluded loci.
std::shared_ptr<const Chart> sphere_chart();
std::shared_ptr<const Chart> shear_chart();

/// Flat reference, P = e^phi diag(e^sigma, e^-sigma). Fields must be
/// expression-backed on the same two-dimensional chart.
Scenario planar_dilation_shear(const ScalarField& phi, const ScalarField& sigma);
/// planar_dilation_shear with sigma = 0.
Scenario pure_dilation(const ScalarField& phi);
/// Flat (theta, phi) reference, P = diag(R, R sin theta).
Scenario sphere_from_flat(double radius);
/// Flat reference, P = [[a(x), s], [s, 1]] with 0 < |s| < 1 and a > s^2 on
/// the chart.
Scenario nondiagonal_shear(const ScalarField& a, double s);
/// The s = 0 end of the shear family, which |s| > 0 excludes from
/// nondiagonal_shear itself. With constant a = 1 this is P = I.
Scenario nondiagonal_shear_baseline(const ScalarField& a);
/// Round sphere of radius R as reference, P = e^factor I.
Scenario conformal_sphere(double radius, const ScalarField& factor);

// ---------------------------------------------------------------------------
// Named scenarios and verification

struct ScenarioInfo {
  std::string name;
  std::string description;
  std::map<std::string, std::string> defaults;
};

const std::vector<ScenarioInfo>& builtin_scenarios();

/// Builds a named scenario with defaults overridden by `params`
/// (e.g. {"R", "2"}, {"phi", "0.3*x"}). Throws std::invalid_argument for
/// unknown names or parameters.
Scenario make_scenario(const std::string& name, const std::map<std::string, std::string>& params = {});

enum class Expectation { Holds, Fails };

struct CheckResult {
  std::string name;
  double tolerance = 0.0;
  double measured = 0.0;  ///< max residual (Holds) or min separation (Fails)
  Expectation expectation = Expectation::Holds;
  int points = 0;
  bool passed = false;
};

struct VerificationReport {
  std::string scenario;
  int resolution = 0;
  DifferentiationScheme scheme;
  std::vector<CheckResult> checks;
  /// Grid points and, per point, the residual of every check (NaN where a
  /// check does not apply at that point).
  std::vector<ChartPoint> points;
  std::vector<std::vector<double>> residuals;
  bool passed() const;
};

/// Tolerance ladder.
inline constexpr double kAlgebraicTol = 1e-10;
inline constexpr double kFirstDerivativeTol = 1e-8;
inline constexpr double kCurvatureTol = 1e-6;

/// Compares every closed form of the scenario with the generic pipeline and
/// checks the structural identities on a resolution x resolution grid.
VerificationReport verify_scenario(const Scenario& s, int resolution, const DifferentiationScheme& scheme);

/// Grid margin that keeps every stencil of the scheme inside the chart box.
double stencil_margin(const Chart& chart, const DifferentiationScheme& scheme, bool curvature);

}  // namespace defgeo
