#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "defgeo/cli.hpp"
#include "defgeo/errors.hpp"
#include "defgeo/scenarios.hpp"

using namespace defgeo;
using namespace defgeo::cli;

namespace {

struct Common {
  std::string scheme;
  double step = 0.0;
  int levels = 0;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, Common& c, bool with_scheme) {
  if (with_scheme) {
    cmd->add_option("--scheme", c.scheme, "differentiation scheme")
        ->check(CLI::IsMember({"analytic", "central", "central_difference", "richardson"}));
    cmd->add_option("--step", c.step, "finite-difference step")->check(CLI::PositiveNumber);
    cmd->add_option("--levels", c.levels, "Richardson levels")->check(CLI::PositiveNumber);
  }
  cmd->add_option("--out", c.out, "write the report here instead of stdout");
  cmd->add_option("--format", c.format, "report format")->check(CLI::IsMember({"csv", "json"}));
}

DifferentiationScheme apply_overrides(DifferentiationScheme s, const Common& c) {
  if (!c.scheme.empty()) {
    s.mode = diff_mode_from_string(c.scheme);
    if (s.mode == DiffMode::Central) s.levels = 1;
  }
  if (c.step > 0.0) s.step = c.step;
  if (c.levels > 0) s.levels = c.levels;
  s.validate();
  return s;
}

int emit(const Report& r, const Common& c) {
  const std::string body = c.format == "csv" ? to_csv(r) : to_json(r);
  if (c.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw ConfigError(c.out + ": cannot write report");
    f << body;
  }
  std::cerr << summary_text(r);
  return r.passed() ? kOk : kVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deformation-induced geometry: evaluate, verify and recover"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common common;

  std::string config_path;
  int resolution_override = 0;
  auto* evaluate = app.add_subcommand("evaluate", "evaluate a geometry config on its grid");
  evaluate->add_option("config", config_path, "geometry config (JSON)")->required();
  evaluate->add_option("--resolution", resolution_override, "override the grid resolution")->check(CLI::PositiveNumber);
  add_common(evaluate, common, true);

  std::string scenario;
  int resolution = 21;
  std::vector<std::string> params;
  auto* verify = app.add_subcommand("verify", "compare a built-in scenario with its closed forms");
  verify->add_option("scenario", scenario, "scenario name")->required();
  verify->add_option("--resolution", resolution, "grid points per axis")->check(CLI::PositiveNumber);
  verify->add_option("--param", params, "scenario parameter as key=value (repeatable)");
  add_common(verify, common, true);

  std::string gbar_path, g_path;
  int grid = 11;
  auto* recover = app.add_subcommand("recover", "recover P from a reference and a deformed metric");
  recover->add_option("gbar", gbar_path, "reference metric file (JSON)")->required();
  recover->add_option("g", g_path, "deformed metric file (JSON)")->required();
  recover->add_option("--grid", grid, "grid points per axis")->check(CLI::PositiveNumber);
  add_common(recover, common, false);

  auto* list = app.add_subcommand("list-scenarios", "list built-in scenarios and their parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*list) {
      for (const auto& s : builtin_scenarios()) {
        std::cout << s.name << "  " << s.description << '\n';
        for (const auto& [k, v] : s.defaults) std::cout << "    " << k << " = " << v << '\n';
      }
      return kOk;
    }
    if (*evaluate) {
      GeometryConfig config = load_geometry_config(config_path);
      config.scheme = apply_overrides(config.scheme, common);
      if (resolution_override > 0) config.resolution = resolution_override;
      return emit(run_evaluate(config), common);
    }
    if (*verify) {
      std::map<std::string, std::string> kv;
      for (const auto& p : params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects key=value, got '" + p + "'");
        kv[p.substr(0, eq)] = p.substr(eq + 1);
      }
      return emit(run_verify(scenario, resolution, apply_overrides(DifferentiationScheme::analytic(), common), kv),
                  common);
    }
    return emit(run_recover(load_metric_config(gbar_path), load_metric_config(g_path), grid), common);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}
