#include "spx/geometry.hpp"

#include <algorithm>
#include <stdexcept>

#include "spx/quadrature.hpp"

namespace spx {

BBox BBox::of(const std::vector<Vec2> &pts) {
  BBox b;
  if (pts.empty()) return b;
  b.lo = b.hi = pts[0];
  for (const auto &p : pts) b.expand(p);
  return b;
}

double polygon_area(const Polygon &poly) {
  const std::size_t n = poly.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 &p = poly[i];
    const Vec2 &q = poly[(i + 1) % n];
    s += p.cross(q);
  }
  return 0.5 * s;
}

Vec2 polygon_centroid(const Polygon &poly) {
  const std::size_t n = poly.size();
  double a = 0.0;
  Vec2 c{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 &p = poly[i];
    const Vec2 &q = poly[(i + 1) % n];
    const double w = p.cross(q);
    a += w;
    c.x += (p.x + q.x) * w;
    c.y += (p.y + q.y) * w;
  }
  a *= 0.5;
  return {c.x / (6.0 * a), c.y / (6.0 * a)};
}

bool point_in_polygon(const Vec2 &p, const Polygon &poly) {
  // Half-open crossing rule so shared vertices are counted once.
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 &a = poly[i];
    const Vec2 &b = poly[(i + 1) % n];
    if ((a.y <= p.y) != (b.y <= p.y)) {
      const double xc = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < xc) inside = !inside;
    }
  }
  return inside;
}

namespace {

bool point_in_tri_strict(const Vec2 &p, const Vec2 &a, const Vec2 &b,
                         const Vec2 &c, double eps) {
  const double d1 = (b - a).cross(p - a);
  const double d2 = (c - b).cross(p - b);
  const double d3 = (a - c).cross(p - c);
  return d1 > eps && d2 > eps && d3 > eps;
}

}  // namespace

std::vector<Triangle> triangulate(const Polygon &input) {
  Polygon poly = input;
  if (polygon_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());

  // Drop duplicate consecutive vertices.
  Polygon clean;
  double scale = 0.0;
  for (const auto &p : poly) scale = std::max(scale, std::abs(p.x) + std::abs(p.y));
  const double tol = 1e-14 * std::max(scale, 1.0);
  for (const auto &p : poly) {
    if (clean.empty() || (p - clean.back()).norm() > tol) clean.push_back(p);
  }
  while (clean.size() > 1 && (clean.front() - clean.back()).norm() <= tol)
    clean.pop_back();

  std::vector<Triangle> tris;
  if (clean.size() < 3) return tris;

  std::vector<int> idx(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) idx[i] = static_cast<int>(i);

  const double ear_eps = -1e-13 * std::max(scale * scale, 1.0);
  int guard = 0;
  while (idx.size() > 3) {
    bool clipped = false;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Vec2 &a = clean[idx[(k + idx.size() - 1) % idx.size()]];
      const Vec2 &b = clean[idx[k]];
      const Vec2 &c = clean[idx[(k + 1) % idx.size()]];
      const double cr = (b - a).cross(c - a);
      if (cr <= ear_eps) continue;  // reflex vertex
      bool blocked = false;
      for (std::size_t m = 0; m < idx.size(); ++m) {
        if (m == k || m == (k + idx.size() - 1) % idx.size() ||
            m == (k + 1) % idx.size())
          continue;
        if (point_in_tri_strict(clean[idx[m]], a, b, c, -1e-15)) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      if (cr > 0.0) tris.push_back({a, b, c});
      idx.erase(idx.begin() + static_cast<long>(k));
      clipped = true;
      break;
    }
    if (!clipped) {
      // Degenerate leftover (collinear chain); clip the least-bad ear.
      if (++guard > 2) break;
      std::size_t best = 0;
      double best_cr = -1e300;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        const Vec2 &a = clean[idx[(k + idx.size() - 1) % idx.size()]];
        const Vec2 &b = clean[idx[k]];
        const Vec2 &c = clean[idx[(k + 1) % idx.size()]];
        const double cr = (b - a).cross(c - a);
        if (cr > best_cr) { best_cr = cr; best = k; }
      }
      const Vec2 &a = clean[idx[(best + idx.size() - 1) % idx.size()]];
      const Vec2 &b = clean[idx[best]];
      const Vec2 &c = clean[idx[(best + 1) % idx.size()]];
      if ((b - a).cross(c - a) > 0.0) tris.push_back({a, b, c});
      idx.erase(idx.begin() + static_cast<long>(best));
    }
  }
  if (idx.size() == 3) {
    const Triangle t{clean[idx[0]], clean[idx[1]], clean[idx[2]]};
    if (t.area() > 0.0) tris.push_back(t);
  }
  return tris;
}

double polygon_monomial_integral(const Polygon &poly, int a, int b) {
  // int_P x^a y^b dA = oint_{dP} x^(a+1)/(a+1) y^b dy, evaluated edge by
  // edge with a Gauss rule that is exact for the resulting 1D polynomial.
  const int deg = a + 1 + b;
  const QuadRule1D &g = gauss_legendre_01(deg / 2 + 1);
  const std::size_t n = poly.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 &p = poly[i];
    const Vec2 &q = poly[(i + 1) % n];
    const double dy = q.y - p.y;
    if (dy == 0.0) continue;
    double edge = 0.0;
    for (std::size_t k = 0; k < g.points.size(); ++k) {
      const double x = p.x + g.points[k] * (q.x - p.x);
      const double y = p.y + g.points[k] * (q.y - p.y);
      edge += g.weights[k] * std::pow(x, a + 1) * std::pow(y, b);
    }
    total += edge * dy;
  }
  return total / (a + 1);
}

}  // namespace spx
