#include "spx/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace spx {

namespace {

QuadRule1D compute_gauss(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_01: n must be >= 1");
  QuadRule1D rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev estimate.
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p1 = 0.0, p0 = 0.0, dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    rule.points[i] = 0.5 * (1.0 - t);  // ascending on [0,1]
    rule.weights[i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
  return rule;
}

}  // namespace

const QuadRule1D &gauss_legendre_01(int n) {
  static std::map<int, QuadRule1D> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
  return it->second;
}

std::vector<QuadPoint2D> tensor_gauss_01(int n) {
  const QuadRule1D &g = gauss_legendre_01(n);
  std::vector<QuadPoint2D> pts;
  pts.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      pts.push_back({{g.points[i], g.points[j]}, g.weights[i] * g.weights[j]});
  return pts;
}

std::vector<QuadPoint2D> triangle_gauss(const Triangle &tri, int n) {
  // Map (u,v) in [0,1]^2 onto the triangle with x = a + u(b-a) + uv(c-b);
  // the Jacobian is 2*area*u, so one extra point in u keeps the stated
  // exactness.
  const QuadRule1D &gu = gauss_legendre_01(n + 1);
  const QuadRule1D &gv = gauss_legendre_01(n);
  const double area2 = (tri.b - tri.a).cross(tri.c - tri.a);
  std::vector<QuadPoint2D> pts;
  pts.reserve(gu.points.size() * gv.points.size());
  for (std::size_t i = 0; i < gu.points.size(); ++i) {
    const double u = gu.points[i];
    for (std::size_t j = 0; j < gv.points.size(); ++j) {
      const double v = gv.points[j];
      const Vec2 x = tri.a + u * ((tri.b - tri.a) + v * (tri.c - tri.b));
      pts.push_back({x, gu.weights[i] * gv.weights[j] * area2 * u});
    }
  }
  return pts;
}

}  // namespace spx
