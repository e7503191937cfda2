#ifndef SPX_CURVE_HPP
#define SPX_CURVE_HPP

#include <string>
#include <vector>

#include "spx/geometry.hpp"

namespace spx {

/// Closed C^2 boundary curve: a periodic cubic spline through (theta, point)
/// data with the given parameter period. Orientation follows the data; the
/// built-in domains are counterclockwise, so the outward normal is the
/// tangent rotated by -90 degrees.
class BoundaryCurve {
 public:
  /// Data may be unsorted and may repeat the closing record; parameters are
  /// folded into one period and sorted.
  BoundaryCurve(std::vector<double> thetas, std::vector<Vec2> points,
                double period);

  Vec2 position(double t) const;
  Vec2 tangent(double t) const;
  Vec2 outward_normal(double t) const;

  double period() const { return period_; }
  double t_begin() const { return thetas_.front(); }
  int node_count() const { return static_cast<int>(points_.size()); }

  /// Closed polyline with `segments` vertices, equispaced in arc length.
  Polygon polyline(int segments) const;
  double length(int samples = 8192) const;
  BBox bounding_box(int samples = 4096) const;

  /// Segment-pair intersection scan on a fine polyline.
  bool is_simple(int segments = 2048) const;

 private:
  int find_interval(double t) const;

  std::vector<double> thetas_;  // sorted, one period, no duplicate closure
  std::vector<Vec2> points_;
  std::vector<Vec2> moments_;   // second derivatives at the nodes
  double period_ = 0.0;
};

/// The bean-shaped benchmark domain (counterclockwise).
BoundaryCurve bean_domain();

/// Near-circle through `n` points on a circle (counterclockwise).
BoundaryCurve circle_domain(const Vec2 &center, double radius, int n = 16);

/// Reads a custom boundary from a JSON file: a list of records with
/// "theta", "x", "y" (optionally a top-level "period", default 2*pi).
BoundaryCurve curve_from_json_file(const std::string &path);

}  // namespace spx

#endif
