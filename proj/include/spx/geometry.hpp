#ifndef SPX_GEOMETRY_HPP
#define SPX_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace spx {

struct Vec2 {
  double x = 0.0, y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2 &o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2 &o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 &operator+=(const Vec2 &o) { x += o.x; y += o.y; return *this; }
  double dot(const Vec2 &o) const { return x * o.x + y * o.y; }
  double cross(const Vec2 &o) const { return x * o.y - y * o.x; }
  double norm() const { return std::sqrt(x * x + y * y); }
};

inline Vec2 operator*(double s, const Vec2 &v) { return {s * v.x, s * v.y}; }

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}
  double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
};

/// Symmetric 2x2 matrix, used for surface metrics.
struct Sym2 {
  double a11 = 1.0, a12 = 0.0, a22 = 1.0;

  double det() const { return a11 * a22 - a12 * a12; }
  /// Applies the inverse; caller is responsible for det() > 0.
  Vec2 solve(const Vec2 &v) const {
    const double d = det();
    return {(a22 * v.x - a12 * v.y) / d, (a11 * v.y - a12 * v.x) / d};
  }
};

struct BBox {
  Vec2 lo{0.0, 0.0}, hi{0.0, 0.0};

  void expand(const Vec2 &p) {
    lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
  }
  static BBox of(const std::vector<Vec2> &pts);
  bool contains(const Vec2 &p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
};

using Polygon = std::vector<Vec2>;  // closed loop, last edge implicit

/// Signed area of a closed polygon (positive for counterclockwise loops).
double polygon_area(const Polygon &poly);

/// Area centroid; valid for polygons with nonzero area.
Vec2 polygon_centroid(const Polygon &poly);

/// Crossing-parity point-in-polygon test against a closed loop.
/// Points on the boundary may land on either side.
bool point_in_polygon(const Vec2 &p, const Polygon &poly);

struct Triangle {
  Vec2 a, b, c;
  double area() const { return 0.5 * (b - a).cross(c - a); }
};

/// Ear-clipping triangulation of a simple polygon (any orientation).
/// Collinear runs and duplicate vertices are tolerated.
std::vector<Triangle> triangulate(const Polygon &poly);

/// Exact integral of x^a y^b over a polygon via the divergence theorem.
/// Used as an independent oracle against triangulated quadrature.
double polygon_monomial_integral(const Polygon &poly, int a, int b);

}  // namespace spx

#endif
