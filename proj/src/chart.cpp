#include "defgeo/chart.hpp"

#include <sstream>
#include <stdexcept>

#include "defgeo/errors.hpp"
#include "defgeo/expr.hpp"

namespace defgeo {

bool Box::contains(std::span<const double> p) const {
  if (p.size() != intervals.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!intervals[i].contains(p[i])) return false;
  return true;
}

std::string ChartPoint::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < coords_.size(); ++i) os << (i ? ", " : "") << coords_[i];
  os << ')';
  return os.str();
}

Chart::Chart(std::vector<std::string> names, Box box, std::vector<Box> excluded)
    : names_(std::make_shared<const std::vector<std::string>>(std::move(names))),
      box_(std::move(box)),
      excluded_(std::move(excluded)) {
  if (names_->empty()) throw std::invalid_argument("chart needs at least one coordinate");
  validate_coordinate_names(*names_);
  if (box_.dim() != names_->size())
    throw std::invalid_argument("chart box dimension does not match coordinate count");
  for (const auto& iv : box_.intervals)
    if (!(iv.lo < iv.hi)) throw std::invalid_argument("chart box interval is degenerate");
  for (const auto& ex : excluded_)
    if (ex.dim() != names_->size())
      throw std::invalid_argument("excluded sub-box dimension does not match chart");
}

bool Chart::usable(const ChartPoint& p) const {
  if (p.dim() != dim() || !box_.contains(p.coords())) return false;
  for (const auto& ex : excluded_)
    if (ex.contains(p.coords())) return false;
  return true;
}

void Chart::require_usable(const ChartPoint& p, const char* what) const {
  if (p.dim() != dim())
    throw StencilError(std::string(what) + ": point " + p.to_string() + " has wrong dimension");
  if (!box_.contains(p.coords()))
    throw StencilError(std::string(what) + ": point " + p.to_string() + " leaves the validity box");
  for (const auto& ex : excluded_)
    if (ex.contains(p.coords()))
      throw StencilError(std::string(what) + ": point " + p.to_string() + " touches an excluded locus");
}

std::vector<ChartPoint> Chart::grid(int resolution, double margin) const {
  if (resolution < 1) throw std::invalid_argument("grid resolution must be positive");
  const std::size_t n = names_->size();
  const auto res = static_cast<std::size_t>(resolution);
  std::vector<std::vector<double>> axes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = box_.intervals[i].lo + margin;
    const double hi = box_.intervals[i].hi - margin;
    if (!(lo <= hi)) throw std::invalid_argument("grid margin exceeds the chart box");
    if (res == 1) {
      axes[i].push_back(0.5 * (lo + hi));
      continue;
    }
    for (std::size_t k = 0; k < res; ++k)
      axes[i].push_back(k + 1 == res ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(res - 1));
  }

  std::vector<ChartPoint> points;
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = axes[i][idx[i]];
    ChartPoint p(std::move(c));
    if (usable(p)) points.push_back(std::move(p));
    std::size_t d = n;
    while (d > 0 && ++idx[d - 1] == res) idx[--d] = 0;
    if (d == 0) break;
  }
  return points;
}

bool Chart::same_as(const Chart& other) const {
  if (names() != other.names() || box_.dim() != other.box_.dim()) return false;
  for (std::size_t i = 0; i < box_.dim(); ++i)
    if (box_.intervals[i].lo != other.box_.intervals[i].lo ||
        box_.intervals[i].hi != other.box_.intervals[i].hi)
      return false;
  return true;
}

}  // namespace defgeo
