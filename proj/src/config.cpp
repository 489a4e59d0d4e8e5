#include <algorithm>
#include <fstream>
#include <sstream>

#include "defgeo/cli.hpp"
#include "defgeo/errors.hpp"
#include "defgeo/expr.hpp"

namespace defgeo::cli {

using nlohmann::json;

const std::vector<std::string>& allowed_outputs() {
  static const std::vector<std::string> names = {"P",      "g", "gammabar", "gamma0",  "Lbar",         "L",
                                                 "Lambda", "Gamma", "C",  "torsion", "nonmetricity", "K"};
  return names;
}

namespace {

// Error helper carrying the document path and a JSON pointer.
class Reader {
 public:
  explicit Reader(std::string path) : path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    throw ConfigError(path_ + ": " + (pointer.empty() ? "/" : pointer) + ": " + message);
  }

  json parse(const std::string& text) const {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      std::size_t line = 1, col = 1;
      const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
      for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') ++line, col = 1;
        else ++col;
      }
      throw ConfigError(path_ + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
    }
  }

  void only_keys(const json& obj, const std::string& ptr, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(ptr, "expected an object");
    for (const auto& [k, v] : obj.items())
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
        fail(ptr + "/" + k, "unknown key");
  }

  const json& require(const json& obj, const std::string& ptr, const char* key) const {
    if (!obj.contains(key)) fail(ptr + "/" + key, "missing");
    return obj.at(key);
  }

  double number(const json& v, const std::string& ptr) const {
    if (!v.is_number()) fail(ptr, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(ptr, "expected a finite number");
    return d;
  }

  int positive_int(const json& v, const std::string& ptr) const {
    if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 100000)
      fail(ptr, "expected a positive integer");
    return static_cast<int>(v.get<long long>());
  }

  std::string text(const json& v, const std::string& ptr) const {
    if (!v.is_string()) fail(ptr, "expected a string");
    return v.get<std::string>();
  }

  Interval interval(const json& v, const std::string& ptr) const {
    if (!v.is_array() || v.size() != 2) fail(ptr, "expected [lo, hi]");
    return {number(v[0], ptr + "/0"), number(v[1], ptr + "/1")};
  }

  Box box(const json& v, const std::string& ptr, std::size_t n) const {
    if (!v.is_array() || v.size() != n) fail(ptr, "expected " + std::to_string(n) + " intervals");
    Box b;
    for (std::size_t i = 0; i < n; ++i) b.intervals.push_back(interval(v[i], ptr + "/" + std::to_string(i)));
    return b;
  }

  std::shared_ptr<const Chart> chart(const json& v, const std::string& ptr) const {
    only_keys(v, ptr, {"dimension", "coordinates", "box", "excluded"});
    const json& coords = require(v, ptr, "coordinates");
    if (!coords.is_array() || coords.empty()) fail(ptr + "/coordinates", "expected a non-empty array of names");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < coords.size(); ++i) names.push_back(text(coords[i], ptr + "/coordinates/" + std::to_string(i)));
    if (v.contains("dimension") && positive_int(v["dimension"], ptr + "/dimension") != static_cast<int>(names.size()))
      fail(ptr + "/dimension", "does not match the number of coordinates");
    const Box b = box(require(v, ptr, "box"), ptr + "/box", names.size());
    std::vector<Box> excluded;
    if (v.contains("excluded")) {
      const json& ex = v["excluded"];
      if (!ex.is_array()) fail(ptr + "/excluded", "expected an array of boxes");
      for (std::size_t i = 0; i < ex.size(); ++i)
        excluded.push_back(box(ex[i], ptr + "/excluded/" + std::to_string(i), names.size()));
    }
    try {
      return std::make_shared<const Chart>(std::move(names), b, std::move(excluded));
    } catch (const std::invalid_argument& e) {
      fail(ptr, e.what());
    }
  }

  // n x n array of expression strings (numbers are accepted as constants);
  // every entry is parsed here so errors point into the document.
  ExprMatrix matrix(const json& v, const std::string& ptr, const Chart& chart) const {
    const auto n = static_cast<std::size_t>(chart.dim());
    if (!v.is_array() || v.size() != n) fail(ptr, "expected " + std::to_string(n) + " rows");
    ExprMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string row = ptr + "/" + std::to_string(i);
      if (!v[i].is_array() || v[i].size() != n) fail(row, "expected " + std::to_string(n) + " entries");
      for (std::size_t j = 0; j < n; ++j) {
        const std::string at = row + "/" + std::to_string(j);
        const json& e = v[i][j];
        std::string src = e.is_number() ? format_number(number(e, at)) : text(e, at);
        try {
          (void)defgeo::parse(src, chart.shared_names());
        } catch (const ParseError& err) {
          fail(at, err.what());
        }
        out[i].push_back(std::move(src));
      }
    }
    return out;
  }

  DifferentiationScheme scheme(const json& v, const std::string& ptr) const {
    DifferentiationScheme s;
    try {
      if (v.is_string()) {
        s.mode = diff_mode_from_string(v.get<std::string>());
      } else {
        only_keys(v, ptr, {"mode", "step", "levels"});
        if (v.contains("mode")) s.mode = diff_mode_from_string(text(v["mode"], ptr + "/mode"));
        if (v.contains("step")) s.step = number(v["step"], ptr + "/step");
        if (v.contains("levels")) s.levels = positive_int(v["levels"], ptr + "/levels");
      }
      s.validate();
    } catch (const std::invalid_argument& e) {
      fail(ptr, e.what());
    }
    return s;
  }

 private:
  std::string path_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

GeometryConfig parse_geometry_config(const std::string& text, const std::string& path) {
  const Reader r(path);
  const json doc = r.parse(text);
  r.only_keys(doc, "", {"chart", "reference_metric", "deformation", "scheme", "outputs", "grid", "points"});

  GeometryConfig c;
  c.source = text;
  c.chart = r.chart(r.require(doc, "", "chart"), "/chart");
  c.reference_metric = r.matrix(r.require(doc, "", "reference_metric"), "/reference_metric", *c.chart);

  const json& def = r.require(doc, "", "deformation");
  if (def.is_object()) {
    r.only_keys(def, "/deformation", {"recover_from"});
    c.recover_from = r.matrix(r.require(def, "/deformation", "recover_from"), "/deformation/recover_from", *c.chart);
  } else {
    c.deformation = r.matrix(def, "/deformation", *c.chart);
  }

  if (doc.contains("scheme")) c.scheme = r.scheme(doc["scheme"], "/scheme");

  if (doc.contains("outputs")) {
    const json& outs = doc["outputs"];
    if (!outs.is_array()) r.fail("/outputs", "expected an array of names");
    for (std::size_t i = 0; i < outs.size(); ++i) {
      const std::string at = "/outputs/" + std::to_string(i);
      std::string name = r.text(outs[i], at);
      const auto& ok = allowed_outputs();
      if (std::find(ok.begin(), ok.end(), name) == ok.end()) r.fail(at, "unknown output '" + name + "'");
      if (std::find(c.outputs.begin(), c.outputs.end(), name) == c.outputs.end()) c.outputs.push_back(std::move(name));
    }
  } else {
    c.outputs = {"g", "Lbar", "L", "Lambda", "Gamma"};
  }
  if (c.chart->dim() != 2 && std::find(c.outputs.begin(), c.outputs.end(), "K") != c.outputs.end())
    r.fail("/outputs", "K needs a two-dimensional chart");

  if (doc.contains("grid") && doc.contains("points")) r.fail("", "give either grid or points, not both");
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    r.only_keys(g, "/grid", {"resolution", "margin"});
    if (g.contains("resolution")) c.resolution = r.positive_int(g["resolution"], "/grid/resolution");
    if (g.contains("margin")) {
      c.margin = r.number(g["margin"], "/grid/margin");
      if (*c.margin < 0.0) r.fail("/grid/margin", "must not be negative");
    }
  }
  if (doc.contains("points")) {
    const json& pts = doc["points"];
    if (!pts.is_array() || pts.empty()) r.fail("/points", "expected a non-empty array of points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string at = "/points/" + std::to_string(i);
      if (!pts[i].is_array() || pts[i].size() != static_cast<std::size_t>(c.chart->dim()))
        r.fail(at, "expected " + std::to_string(c.chart->dim()) + " coordinates");
      std::vector<double> xs;
      for (std::size_t k = 0; k < pts[i].size(); ++k) xs.push_back(r.number(pts[i][k], at + "/" + std::to_string(k)));
      ChartPoint p(std::move(xs));
      if (!c.chart->usable(p)) r.fail(at, "point " + p.to_string() + " is outside the usable chart");
      c.points.push_back(std::move(p));
    }
  }
  return c;
}

GeometryConfig load_geometry_config(const std::string& path) { return parse_geometry_config(read_file(path), path); }

MetricConfig parse_metric_config(const std::string& text, const std::string& path) {
  const Reader r(path);
  const json doc = r.parse(text);
  r.only_keys(doc, "", {"chart", "metric"});
  MetricConfig c;
  c.source = text;
  c.chart = r.chart(r.require(doc, "", "chart"), "/chart");
  c.metric = r.matrix(r.require(doc, "", "metric"), "/metric", *c.chart);
  return c;
}

MetricConfig load_metric_config(const std::string& path) { return parse_metric_config(read_file(path), path); }

}  // namespace defgeo::cli
