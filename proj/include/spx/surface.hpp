#ifndef SPX_SURFACE_HPP
#define SPX_SURFACE_HPP

#include <array>
#include <functional>

#include "spx/geometry.hpp"

namespace spx {

struct MetricData {
  Sym2 G;
  double sqrt_det = 1.0;
};

/// Smooth map from the 2D reference domain onto a surface in R^3, with an
/// analytic Jacobian. The induced metric G = J^T J must be SPD wherever
/// quadrature points land. The identity map short-circuits to the exact
/// unit metric so flat assembly and mapped assembly share one code path.
class SurfaceMap {
 public:
  using MapFn = std::function<Vec3(const Vec2 &)>;
  using JacFn = std::function<std::array<Vec3, 2>(const Vec2 &)>;

  static SurfaceMap identity();
  static SurfaceMap analytic(MapFn map, JacFn jac);

  bool is_identity() const { return identity_; }
  Vec3 position(const Vec2 &x) const;
  std::array<Vec3, 2> jacobian(const Vec2 &x) const;
  MetricData metric(const Vec2 &x) const;

 private:
  SurfaceMap() = default;
  bool identity_ = false;
  MapFn map_;
  JacFn jac_;
};

/// Map from the unit-square reference domain onto a cone surface
/// z = slope * dist(x, apex); the apex sits outside the square so the
/// metric stays smooth and SPD on the trim region.
SurfaceMap cone_map(const Vec2 &apex = {-0.25, 0.5}, double slope = 0.75);

/// Right-hand side f∘Φ for the surface Laplace problem manufactured from a
/// reference-domain solution u: f = -|G|^{-1/2} div(|G|^{1/2} G^{-1} grad u),
/// evaluated with high-order central differences of the flux field.
std::function<double(const Vec2 &)> manufactured_surface_rhs(
    const SurfaceMap &map, std::function<double(const Vec2 &)> u,
    std::function<Vec2(const Vec2 &)> grad_u, double fd_step = 5e-4);

}  // namespace spx

#endif
