#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "defgeo/fields.hpp"

namespace defgeo::cli {

inline constexpr const char* kToolVersion = "defgeo 1.0.0";

/// Exit status contract.
enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kConfigError = 2, kNumericalError = 3 };

/// Quantities a report may carry, with their column prefixes.
///   P, g              matrices, [i][j]
///   gammabar, gamma0, Lbar, L, Lambda, Gamma, C, torsion
///                     [rho][mu][nu] for X^rho_{mu nu}
///   nonmetricity      Q_{mu nu rho} = -nabla_mu g_{nu rho}, [mu][nu][rho]
///   K                 Gaussian curvature of g (two-dimensional charts)
const std::vector<std::string>& allowed_outputs();

using ExprMatrix = std::vector<std::vector<std::string>>;

/// A declarative geometry definition, read from a JSON document:
///
///   {
///     "chart": {"coordinates": ["x", "y"], "box": [[-1, 1], [-1, 1]],
///               "excluded": [[[lo, hi], [lo, hi]], ...]},
///     "reference_metric": [["1", "0"], ["0", "1"]],
///     "deformation": [["1 + x", "0.5"], ["0.5", "1"]],
///         or {"recover_from": [[... target metric g ...]]},
///     "scheme": {"mode": "analytic", "step": 1e-5, "levels": 2},
///     "outputs": ["Lbar", "L"],
///     "grid": {"resolution": 11, "margin": 0.0}  or  "points": [[0, 0], ...]
///   }
struct GeometryConfig {
  std::shared_ptr<const Chart> chart;
  ExprMatrix reference_metric;
  std::optional<ExprMatrix> deformation;
  std::optional<ExprMatrix> recover_from;
  DifferentiationScheme scheme;
  std::vector<std::string> outputs;
  int resolution = 11;
  std::optional<double> margin;  ///< default: just enough for the scheme's stencils
  std::vector<ChartPoint> points;
  std::string source;            ///< document text, for the provenance hash
};

/// A single metric on a chart, for `recover`: {"chart": {...}, "metric": [[...]]}.
struct MetricConfig {
  std::shared_ptr<const Chart> chart;
  ExprMatrix metric;
  std::string source;
};

/// Parsing throws ConfigError naming `path`, the line and column of JSON
/// syntax errors, or the JSON pointer of the offending entry.
GeometryConfig parse_geometry_config(const std::string& text, const std::string& path = "<config>");
GeometryConfig load_geometry_config(const std::string& path);
MetricConfig parse_metric_config(const std::string& text, const std::string& path = "<metric>");
MetricConfig load_metric_config(const std::string& path);

struct SummaryEntry {
  std::string name;
  std::string expectation;  ///< "holds" or "fails"
  double tolerance = 0.0;
  double measured = 0.0;
  bool passed = false;
};

/// Per-point records plus summary and provenance. Rows hold the point
/// coordinates followed by `columns`.
struct Report {
  std::string kind;
  std::vector<std::string> coordinates;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<SummaryEntry> summary;
  nlohmann::ordered_json provenance;
  bool passed() const;
};

std::string to_csv(const Report& r);
std::string to_json(const Report& r);
/// One line per summary entry, for the terminal.
std::string summary_text(const Report& r);

/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

Report run_evaluate(const GeometryConfig& config);
Report run_verify(const std::string& scenario, int resolution, const DifferentiationScheme& scheme,
                  const std::map<std::string, std::string>& params = {});
/// Condition numbers of S above this are reported as a numerical failure.
inline constexpr double kConditionLimit = 1e12;
Report run_recover(const MetricConfig& gbar, const MetricConfig& g, int resolution);

}  // namespace defgeo::cli
