#include "spx/surface.hpp"

#include <cmath>
#include <stdexcept>

namespace spx {

SurfaceMap SurfaceMap::identity() {
  SurfaceMap m;
  m.identity_ = true;
  return m;
}

SurfaceMap SurfaceMap::analytic(MapFn map, JacFn jac) {
  SurfaceMap m;
  m.map_ = std::move(map);
  m.jac_ = std::move(jac);
  return m;
}

Vec3 SurfaceMap::position(const Vec2 &x) const {
  if (identity_) return {x.x, x.y, 0.0};
  return map_(x);
}

std::array<Vec3, 2> SurfaceMap::jacobian(const Vec2 &x) const {
  if (identity_) return {Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}};
  return jac_(x);
}

MetricData SurfaceMap::metric(const Vec2 &x) const {
  if (identity_) return {Sym2{1.0, 0.0, 1.0}, 1.0};
  const auto J = jac_(x);
  MetricData m;
  m.G.a11 = J[0].dot(J[0]);
  m.G.a12 = J[0].dot(J[1]);
  m.G.a22 = J[1].dot(J[1]);
  const double det = m.G.det();
  if (det <= 0.0)
    throw std::runtime_error("SurfaceMap: metric not positive definite at (" +
                             std::to_string(x.x) + ", " + std::to_string(x.y) + ")");
  m.sqrt_det = std::sqrt(det);
  return m;
}

SurfaceMap cone_map(const Vec2 &apex, double slope) {
  auto map = [apex, slope](const Vec2 &x) -> Vec3 {
    const double r = std::hypot(x.x - apex.x, x.y - apex.y);
    return {x.x, x.y, slope * r};
  };
  auto jac = [apex, slope](const Vec2 &x) -> std::array<Vec3, 2> {
    const double dx = x.x - apex.x, dy = x.y - apex.y;
    const double r = std::hypot(dx, dy);
    return {Vec3{1.0, 0.0, slope * dx / r}, Vec3{0.0, 1.0, slope * dy / r}};
  };
  return SurfaceMap::analytic(map, jac);
}

std::function<double(const Vec2 &)> manufactured_surface_rhs(
    const SurfaceMap &map, std::function<double(const Vec2 &)> u,
    std::function<Vec2(const Vec2 &)> grad_u, double fd_step) {
  auto flux = [map, grad_u](const Vec2 &x) -> Vec2 {
    const MetricData m = map.metric(x);
    const Vec2 g = m.G.solve(grad_u(x));
    return {m.sqrt_det * g.x, m.sqrt_det * g.y};
  };
  (void)u;
  return [map, flux, fd_step](const Vec2 &x) {
    const double e = fd_step;
    // fourth-order central differences of the flux divergence
    const double dFx =
        (-flux({x.x + 2 * e, x.y}).x + 8.0 * flux({x.x + e, x.y}).x -
         8.0 * flux({x.x - e, x.y}).x + flux({x.x - 2 * e, x.y}).x) /
        (12.0 * e);
    const double dFy =
        (-flux({x.x, x.y + 2 * e}).y + 8.0 * flux({x.x, x.y + e}).y -
         8.0 * flux({x.x, x.y - e}).y + flux({x.x, x.y - 2 * e}).y) /
        (12.0 * e);
    return -(dFx + dFy) / map.metric(x).sqrt_det;
  };
}

}  // namespace spx
