#pragma once

#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace defgeo {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
};

/// Axis-aligned closed box in coordinate space.
struct Box {
  std::vector<Interval> intervals;

  std::size_t dim() const { return intervals.size(); }
  bool contains(std::span<const double> p) const;
};

/// A point on a single chart, in that chart's coordinates.
class ChartPoint {
 public:
  ChartPoint() = default;
  explicit ChartPoint(std::vector<double> coords) : coords_(std::move(coords)) {}
  ChartPoint(std::initializer_list<double> coords) : coords_(coords) {}

  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const { return coords_; }

  /// Copy moved by `delta` along coordinate direction `mu`.
  ChartPoint shifted(int mu, double delta) const {
    ChartPoint q = *this;
    q.coords_[static_cast<std::size_t>(mu)] += delta;
    return q;
  }

  std::string to_string() const;

  friend bool operator==(const ChartPoint&, const ChartPoint&) = default;

 private:
  std::vector<double> coords_;
};

/// One coordinate chart: names, a validity box and excluded sub-boxes
/// (singular loci such as sin(theta) = 0).
class Chart {
 public:
  Chart(std::vector<std::string> names, Box box, std::vector<Box> excluded = {});

  int dim() const { return static_cast<int>(names_->size()); }
  const std::vector<std::string>& names() const { return *names_; }
  const std::shared_ptr<const std::vector<std::string>>& shared_names() const { return names_; }
  const Box& box() const { return box_; }
  const std::vector<Box>& excluded() const { return excluded_; }

  /// Inside the validity box and outside every excluded sub-box.
  bool usable(const ChartPoint& p) const;
  /// Throws StencilError naming `what` unless usable(p).
  void require_usable(const ChartPoint& p, const char* what) const;

  /// resolution^n tensor grid over the box shrunk by `margin` on every side,
  /// last coordinate varying fastest. resolution 1 gives the centre.
  /// Points landing in an excluded sub-box are dropped.
  std::vector<ChartPoint> grid(int resolution, double margin = 0.0) const;

  bool same_as(const Chart& other) const;

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
  Box box_;
  std::vector<Box> excluded_;
};

}  // namespace defgeo
