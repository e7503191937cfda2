#ifndef SPX_MESH_HPP
#define SPX_MESH_HPP

#include <memory>
#include <vector>

#include "spx/bspline.hpp"
#include "spx/geometry.hpp"

namespace spx {

class TrimmedDomain;

/// Uniform axis-aligned square mesh; element (i,j) occupies
/// [origin.x + i h, origin.x + (i+1) h] x [origin.y + j h, origin.y + (j+1) h].
struct BackgroundMesh {
  Vec2 origin{0.0, 0.0};
  double h = 1.0;
  int nx = 0, ny = 0;
  Vec2 shift{0.0, 0.0};  // offset in [0,h)^2 already folded into origin

  int element_count() const { return nx * ny; }
  int element_id(int ex, int ey) const { return ey * nx + ex; }
  int element_x(int e) const { return e % nx; }
  int element_y(int e) const { return e / nx; }
  Vec2 element_min(int e) const {
    return {origin.x + element_x(e) * h, origin.y + element_y(e) * h};
  }
  Vec2 element_center(int e) const {
    const Vec2 m = element_min(e);
    return {m.x + 0.5 * h, m.y + 0.5 * h};
  }
  Vec2 to_local(int e, const Vec2 &x) const {
    const Vec2 m = element_min(e);
    return {(x.x - m.x) / h, (x.y - m.y) / h};
  }
  Vec2 to_global(int e, const Vec2 &s) const {
    const Vec2 m = element_min(e);
    return {m.x + s.x * h, m.y + s.y * h};
  }
  BBox rect() const {
    return {origin, {origin.x + nx * h, origin.y + ny * h}};
  }

  /// Mesh covering `box` with at least `margin_layers` element layers of
  /// slack on every side, for any shift in [0,h)^2.
  static BackgroundMesh covering(const BBox &box, double h, int margin_layers,
                                 const Vec2 &shift = {0.0, 0.0});
};

/// Tensor-product B-spline space of degree p with maximal regularity
/// k = p-1 on a background mesh. Knot lines coincide with mesh lines and
/// extend p elements beyond each side, so every basis function is an
/// untruncated uniform B-spline. Basis (gx, gy) has support
/// [origin + (gx-p) h, origin + (gx+1) h] x (same in y) covering a
/// (p+1) x (p+1) block of element indices [gx-p, gx] x [gy-p, gy].
class SplineSpace {
 public:
  SplineSpace(const BackgroundMesh &mesh, int degree);

  const BackgroundMesh &mesh() const { return mesh_; }
  int degree() const { return p_; }
  int regularity() const { return p_ - 1; }
  const BasisLocal &local() const { return *local_; }

  int basis_nx() const { return mesh_.nx + p_; }
  int basis_ny() const { return mesh_.ny + p_; }
  int basis_count() const { return basis_nx() * basis_ny(); }
  int basis_id(int gx, int gy) const { return gy * basis_nx() + gx; }
  int basis_x(int g) const { return g % basis_nx(); }
  int basis_y(int g) const { return g / basis_nx(); }

  /// Support rectangle of basis g (may extend beyond the mesh rectangle).
  BBox basis_support(int g) const;

  /// Global ids of the (p+1)^2 basis functions containing element e, in the
  /// fixed local order l = ly*(p+1) + lx.
  void element_basis(int e, int *out) const;
  std::vector<int> element_basis(int e) const;

  /// Element indices (clamped to the mesh) in the support of basis g.
  std::vector<int> support_elements(int g) const;

  /// Value and gradient of basis g at x; zero outside the support.
  double eval_basis(int g, const Vec2 &x, Vec2 *grad = nullptr) const;

 private:
  BackgroundMesh mesh_;
  int p_;
  std::shared_ptr<const BasisLocal> local_;
};

/// Active part of a spline space with respect to a trimmed domain: the
/// elements with |T ∩ Ω| > 0 and the basis functions supported on them.
struct ActiveMesh {
  const SplineSpace *space = nullptr;
  std::vector<int> elements;      // active element ids, ascending
  std::vector<int> element_rank;  // by element id; -1 if inactive
  std::vector<int> basis;         // active basis ids, ascending
  std::vector<int> basis_rank;    // by basis id; -1 if inactive

  int element_count() const { return static_cast<int>(elements.size()); }
  int dof_count() const { return static_cast<int>(basis.size()); }
  bool is_active_element(int e) const { return element_rank[e] >= 0; }

  /// Active elements inside the support of basis g, ascending element id.
  std::vector<int> active_support_elements(int g) const;
};

ActiveMesh active_extract(const SplineSpace &space, const TrimmedDomain &dom);

/// Evaluate a spline field given by active-basis coefficients at x; x must
/// lie in an active element (else evaluation uses the containing background
/// element, with inactive coefficients treated as zero).
double eval_spline(const ActiveMesh &am, const std::vector<double> &coeffs,
                   const Vec2 &x, Vec2 *grad = nullptr);

}  // namespace spx

#endif
