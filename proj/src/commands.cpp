#include <algorithm>
#include <limits>

#include "defgeo/cli.hpp"
#include "defgeo/errors.hpp"
#include "defgeo/pipeline.hpp"
#include "defgeo/scenarios.hpp"

namespace defgeo::cli {

using nlohmann::ordered_json;

namespace {

ordered_json scheme_json(const DifferentiationScheme& s) {
  ordered_json j{{"mode", to_string(s.mode)}};
  if (s.mode != DiffMode::Analytic) j["step"] = s.step;
  if (s.mode == DiffMode::Richardson) j["levels"] = s.levels;
  return j;
}

std::string suffix(std::initializer_list<int> idx) {
  std::string s;
  for (int i : idx) s += "_" + std::to_string(i);
  return s;
}

void add_matrix(const std::string& name, const Matrix& m, std::vector<std::string>* cols, std::vector<double>& row) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (cols) cols->push_back(name + suffix({i, j}));
      row.push_back(m(i, j));
    }
}

void add_tensor(const std::string& name, const Tensor3& t, std::vector<std::string>* cols, std::vector<double>& row) {
  const int n = t.dim();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (cols) cols->push_back(name + suffix({a, b, c}));
        row.push_back(t(a, b, c));
      }
}

void add_output(const std::string& name, const PointGeometry& pg, std::vector<std::string>* cols,
                std::vector<double>& row) {
  if (name == "P") return add_matrix(name, pg.P, cols, row);
  if (name == "g") return add_matrix(name, pg.g.matrix(), cols, row);
  if (name == "gammabar") return add_tensor(name, pg.gamma_bar.values, cols, row);
  if (name == "gamma0") return add_tensor(name, pg.gamma0.values, cols, row);
  if (name == "Lbar") return add_tensor(name, pg.raw.as_tensor(), cols, row);
  if (name == "L") return add_tensor(name, pg.deformed.as_tensor(), cols, row);
  if (name == "Lambda") return add_tensor(name, pg.lambda.as_tensor(), cols, row);
  if (name == "Gamma") return add_tensor(name, pg.total.coefficients.values, cols, row);
  if (name == "C") return add_tensor(name, pg.deviation, cols, row);
  if (name == "torsion") return add_tensor(name, pg.torsion, cols, row);
  if (name == "nonmetricity") return add_tensor(name, Tensor3(pg.nabla_g.dim()) - pg.nabla_g, cols, row);
  if (name == "K") {
    if (cols) cols->push_back("K");
    row.push_back(*pg.curvature->gaussian);
    return;
  }
  throw ConfigError("unknown output '" + name + "'");
}

// Running maxima of the identities every deformed geometry satisfies.
class IdentitySummary {
 public:
  void add(const std::string& name, double tol, double v) {
    for (auto& e : entries_)
      if (e.name == name) {
        e.measured = std::max(e.measured, v);
        return;
      }
    entries_.push_back({name, "holds", tol, v, false});
  }
  void add(const IdentityResiduals& id) {
    add("deviation_equals_compensation", kAlgebraicTol, id.deviation_equals_lambda);
    add("compensation_self_adjoint", kAlgebraicTol, id.lambda_self_adjoint);
    add("sym_idempotent", kAlgebraicTol, id.sym_idempotent);
    add("antisymmetric_remainder", kAlgebraicTol, id.antisymmetric_remainder);
    add("frame_similarity", kAlgebraicTol, id.similarity);
    add("nonmetricity_identity", kFirstDerivativeTol, id.nonmetricity_identity);
    add("levi_civita_compatible", kFirstDerivativeTol, id.levi_civita_compatibility);
    add("levi_civita_symmetric", kAlgebraicTol, id.levi_civita_symmetry);
    add("commutator_criterion", 0.0, id.corollary_consistent ? 0.0 : 1.0);
  }
  std::vector<SummaryEntry> finish() {
    for (auto& e : entries_) e.passed = e.measured <= e.tolerance;
    return std::move(entries_);
  }

 private:
  std::vector<SummaryEntry> entries_;
};

// Coordinate columns must not collide with value columns.
void disambiguate(Report& r) {
  for (auto& c : r.coordinates)
    if (std::find(r.columns.begin(), r.columns.end(), c) != r.columns.end()) c = "coord_" + c;
}

}  // namespace

Report run_evaluate(const GeometryConfig& config) {
  const auto& chart = config.chart;
  const MetricField gbar(MatrixField::parse(chart, config.reference_metric));
  std::optional<MetricField> target;
  if (config.recover_from) target.emplace(MatrixField::parse(chart, *config.recover_from));
  const DeformationField P = target ? recovered_deformation_field(gbar, *target)
                                    : DeformationField(MatrixField::parse(chart, *config.deformation), gbar);

  const bool want_k = std::find(config.outputs.begin(), config.outputs.end(), "K") != config.outputs.end();
  const std::vector<ChartPoint> points =
      config.points.empty()
          ? chart->grid(config.resolution, config.margin.value_or(stencil_margin(*chart, config.scheme, want_k)))
          : config.points;
  if (points.empty()) throw ConfigError("the grid has no usable points");

  IdentitySummary summary;
  if (target) {
    double worst_residual = 0.0, worst_condition = 0.0;
    for (const ChartPoint& p : points) {
      const Recovery rec = recover_deformation_report(gbar.at(p), target->at(p));
      if (rec.condition_number > kConditionLimit)
        throw RecoveryError("recovery is ill-conditioned at " + p.to_string(), rec.condition_number);
      worst_residual = std::max(worst_residual, rec.residual);
      worst_condition = std::max(worst_condition, rec.condition_number);
    }
    summary.add("recovery_roundtrip", 1e-9, worst_residual);
    summary.add("recovery_condition_number", kConditionLimit, worst_condition);
  } else {
    // Pure-deformation validation at every evaluation point.
    double worst = 0.0;
    const ChartPoint* worst_point = nullptr;
    for (const ChartPoint& p : points) {
      const PureDeformationCheck c = check_pure_deformation(P(p), gbar.components()(p));
      if (c.ok()) continue;
      const double defect = std::max(c.symmetry_defect, -c.min_eigenvalue);
      if (!worst_point || defect > worst) worst = defect, worst_point = &p;
    }
    if (worst_point) throw ValidationError("deformation is not a pure deformation", worst_point->to_string(), worst);
  }

  Report report;
  report.kind = "evaluate";
  report.coordinates = chart->names();

  const DeformedGeometry geo(P);
  for (const ChartPoint& p : points) {
    PointGeometry pg = [&] {
      try {
        return geo.evaluate(p, config.scheme, want_k);
      } catch (const NumericalError& e) {
        throw NumericalError("evaluating the geometry at " + p.to_string() + ": " + e.what());
      }
    }();
    summary.add(identity_residuals(pg));
    std::vector<double> row(p.coords().begin(), p.coords().end());
    const bool first = report.rows.empty();
    for (const auto& name : config.outputs) add_output(name, pg, first ? &report.columns : nullptr, row);
    report.rows.push_back(std::move(row));
  }
  report.summary = summary.finish();
  disambiguate(report);
  report.provenance = ordered_json{{"tool_version", kToolVersion},
                                   {"config_hash", fnv1a_hex(config.source)},
                                   {"scheme", scheme_json(config.scheme)},
                                   {"mode", target ? "recover_from" : "deformation"},
                                   {"points", points.size()}};
  return report;
}

Report run_verify(const std::string& scenario, int resolution, const DifferentiationScheme& scheme,
                  const std::map<std::string, std::string>& params) {
  if (resolution < 1) throw ConfigError("resolution must be positive");
  const Scenario s = make_scenario(scenario, params);
  const VerificationReport v = verify_scenario(s, resolution, scheme);

  Report report;
  report.kind = "verify";
  std::vector<std::string> check_names;
  for (const auto& c : v.checks) check_names.push_back(c.name);
  report.coordinates = s.chart->names();
  report.columns = check_names;
  disambiguate(report);
  for (std::size_t i = 0; i < v.points.size(); ++i) {
    std::vector<double> row(v.points[i].coords().begin(), v.points[i].coords().end());
    row.insert(row.end(), v.residuals[i].begin(), v.residuals[i].end());
    report.rows.push_back(std::move(row));
  }
  for (const auto& c : v.checks)
    report.summary.push_back({c.name, c.expectation == Expectation::Holds ? "holds" : "fails", c.tolerance,
                              c.measured, c.passed});

  std::map<std::string, std::string> merged;
  for (const auto& info : builtin_scenarios())
    if (info.name == scenario) merged = info.defaults;
  for (const auto& [k, val] : params) merged[k] = val;
  std::string canonical = "verify " + scenario + " " + std::to_string(resolution);
  for (const auto& [k, val] : merged) canonical += " " + k + "=" + val;
  report.provenance = ordered_json{{"tool_version", kToolVersion},
                                   {"config_hash", fnv1a_hex(canonical)},
                                   {"scheme", scheme_json(scheme)},
                                   {"scenario", scenario},
                                   {"parameters", merged},
                                   {"resolution", resolution},
                                   {"points", v.points.size()}};
  return report;
}

Report run_recover(const MetricConfig& gbar_cfg, const MetricConfig& g_cfg, int resolution) {
  if (!gbar_cfg.chart->same_as(*g_cfg.chart)) throw ConfigError("the two metrics must share a chart");
  const auto& chart = gbar_cfg.chart;
  const MetricField gbar(MatrixField::parse(chart, gbar_cfg.metric));
  const MetricField g(MatrixField::parse(chart, g_cfg.metric));
  const std::vector<ChartPoint> points = chart->grid(resolution);
  if (points.empty()) throw ConfigError("the grid has no usable points");

  Report report;
  report.kind = "recover";
  report.coordinates = chart->names();
  double worst_rel = 0.0, worst_cond = 0.0, worst_sym = 0.0;
  for (const ChartPoint& p : points) {
    const MetricAtPoint gb = gbar.at(p), gg = g.at(p);
    const Recovery rec = recover_deformation_report(gb, gg);
    if (rec.condition_number > kConditionLimit)
      throw RecoveryError("recovery is ill-conditioned at " + p.to_string(), rec.condition_number);
    const double abs_residual = max_abs(rec.P.transpose() * gb.matrix() * rec.P - gg.matrix());
    worst_rel = std::max(worst_rel, rec.residual);
    worst_cond = std::max(worst_cond, rec.condition_number);
    worst_sym = std::max(worst_sym, check_pure_deformation(rec.P, gb.matrix()).symmetry_defect);

    std::vector<double> row(p.coords().begin(), p.coords().end());
    const bool first = report.rows.empty();
    add_matrix("P", rec.P, first ? &report.columns : nullptr, row);
    if (first) report.columns.insert(report.columns.end(), {"residual", "relative_residual", "condition_number"});
    row.insert(row.end(), {abs_residual, rec.residual, rec.condition_number});
    report.rows.push_back(std::move(row));
  }
  disambiguate(report);
  report.summary = {{"recovery_roundtrip", "holds", 1e-9, worst_rel, worst_rel <= 1e-9},
                    {"recovered_gbar_symmetric", "holds", kAlgebraicTol, worst_sym, worst_sym <= kAlgebraicTol},
                    {"recovery_condition_number", "holds", kConditionLimit, worst_cond, worst_cond <= kConditionLimit}};
  report.provenance = ordered_json{{"tool_version", kToolVersion},
                                   {"config_hash", fnv1a_hex(gbar_cfg.source + '\0' + g_cfg.source)},
                                   {"resolution", resolution},
                                   {"points", points.size()}};
  return report;
}

}  // namespace defgeo::cli
