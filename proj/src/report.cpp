#include <charconv>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "defgeo/cli.hpp"

namespace defgeo::cli {

bool Report::passed() const {
  for (const auto& s : summary)
    if (!s.passed) return false;
  return true;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

std::string to_csv(const Report& r) {
  std::ostringstream os;
  bool first = true;
  for (const auto& c : r.coordinates) os << (first ? "" : ",") << c, first = false;
  for (const auto& c : r.columns) os << (first ? "" : ",") << c, first = false;
  os << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
  return os.str();
}

namespace {

nlohmann::ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string to_json(const Report& r) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["kind"] = r.kind;
  doc["provenance"] = r.provenance;
  doc["coordinates"] = r.coordinates;
  doc["columns"] = r.columns;
  ordered_json points = ordered_json::array();
  const std::size_t nc = r.coordinates.size();
  for (const auto& row : r.rows) {
    ordered_json p;
    ordered_json coords = ordered_json::array();
    for (std::size_t i = 0; i < nc; ++i) coords.push_back(row[i]);
    p["coordinates"] = std::move(coords);
    ordered_json values;
    for (std::size_t i = 0; i < r.columns.size(); ++i) values[r.columns[i]] = number_or_null(row[nc + i]);
    p["values"] = std::move(values);
    points.push_back(std::move(p));
  }
  doc["points"] = std::move(points);
  ordered_json ids = ordered_json::array();
  for (const auto& s : r.summary)
    ids.push_back(ordered_json{{"name", s.name},
                               {"expectation", s.expectation},
                               {"tolerance", s.tolerance},
                               {"measured", number_or_null(s.measured)},
                               {"passed", s.passed}});
  doc["summary"] = ordered_json{{"passed", r.passed()}, {"identities", std::move(ids)}};
  return doc.dump(2) + "\n";
}

std::string summary_text(const Report& r) {
  std::ostringstream os;
  for (const auto& s : r.summary) {
    os << (s.passed ? "PASS " : "FAIL ") << s.name << "  measured " << format_number(s.measured)
       << (s.expectation == "fails" ? "  must exceed " : "  tolerance ") << format_number(s.tolerance);
    if (s.expectation == "fails") os << "  (expected to fail)";
    os << '\n';
  }
  os << (r.passed() ? "all checks passed" : "some checks failed") << '\n';
  return os.str();
}

}  // namespace defgeo::cli
