#include "spx/mesh.hpp"

#include <cmath>
#include <stdexcept>

#include "spx/trim.hpp"

namespace spx {

BackgroundMesh BackgroundMesh::covering(const BBox &box, double h,
                                        int margin_layers, const Vec2 &shift) {
  if (h <= 0.0) throw std::invalid_argument("BackgroundMesh: h must be positive");
  BackgroundMesh m;
  m.h = h;
  m.shift = shift;
  // One extra layer absorbs the shift so the margin holds for any offset.
  m.origin = {box.lo.x - (margin_layers + 1) * h + shift.x,
              box.lo.y - (margin_layers + 1) * h + shift.y};
  m.nx = static_cast<int>(std::ceil((box.hi.x - box.lo.x) / h)) + 2 * margin_layers + 2;
  m.ny = static_cast<int>(std::ceil((box.hi.y - box.lo.y) / h)) + 2 * margin_layers + 2;
  return m;
}

SplineSpace::SplineSpace(const BackgroundMesh &mesh, int degree)
    : mesh_(mesh), p_(degree), local_(std::make_shared<BasisLocal>(degree)) {
  if (degree < 1) throw std::invalid_argument("SplineSpace: degree must be >= 1");
}

BBox SplineSpace::basis_support(int g) const {
  const int gx = basis_x(g), gy = basis_y(g);
  const double h = mesh_.h;
  return {{mesh_.origin.x + (gx - p_) * h, mesh_.origin.y + (gy - p_) * h},
          {mesh_.origin.x + (gx + 1) * h, mesh_.origin.y + (gy + 1) * h}};
}

void SplineSpace::element_basis(int e, int *out) const {
  const int ex = mesh_.element_x(e), ey = mesh_.element_y(e);
  const int n = p_ + 1;
  for (int ly = 0; ly < n; ++ly)
    for (int lx = 0; lx < n; ++lx)
      out[ly * n + lx] = basis_id(ex + lx, ey + ly);
}

std::vector<int> SplineSpace::element_basis(int e) const {
  std::vector<int> ids((p_ + 1) * (p_ + 1));
  element_basis(e, ids.data());
  return ids;
}

std::vector<int> SplineSpace::support_elements(int g) const {
  const int gx = basis_x(g), gy = basis_y(g);
  std::vector<int> out;
  for (int ey = std::max(0, gy - p_); ey <= std::min(mesh_.ny - 1, gy); ++ey)
    for (int ex = std::max(0, gx - p_); ex <= std::min(mesh_.nx - 1, gx); ++ex)
      out.push_back(mesh_.element_id(ex, ey));
  return out;
}

double SplineSpace::eval_basis(int g, const Vec2 &x, Vec2 *grad) const {
  if (g < 0 || g >= basis_count())
    throw std::out_of_range("eval_basis: basis index out of range");
  if (grad) *grad = {0.0, 0.0};
  const double h = mesh_.h;
  const double ux = (x.x - mesh_.origin.x) / h;
  const double uy = (x.y - mesh_.origin.y) / h;
  // Containing span in the extended index range; supports may reach into
  // the knot extension beyond the mesh rectangle.
  const int ix = static_cast<int>(std::floor(ux));
  const int iy = static_cast<int>(std::floor(uy));
  const int gx = basis_x(g), gy = basis_y(g);
  const int lx = gx - ix, ly = gy - iy;  // local index of g on span (ix, iy)
  if (lx < 0 || lx > p_ || ly < 0 || ly > p_) return 0.0;
  const double sx = ux - ix, sy = uy - iy;
  const double vx = local_->piece(lx).eval(sx);
  const double vy = local_->piece(ly).eval(sy);
  if (grad) {
    grad->x = local_->piece_deriv(lx).eval(sx) * vy / h;
    grad->y = vx * local_->piece_deriv(ly).eval(sy) / h;
  }
  return vx * vy;
}

std::vector<int> ActiveMesh::active_support_elements(int g) const {
  std::vector<int> out;
  for (int e : space->support_elements(g))
    if (element_rank[e] >= 0) out.push_back(e);
  return out;
}

ActiveMesh active_extract(const SplineSpace &space, const TrimmedDomain &dom) {
  const BackgroundMesh &mesh = space.mesh();
  const int p = space.degree();
  // All active basis supports must stay inside the mesh rectangle.
  const BBox bb = dom.domain_box();
  const BBox rect = mesh.rect();
  const double margin = (p + 1) * mesh.h;
  if (bb.lo.x - rect.lo.x < margin - 1e-12 * mesh.h ||
      bb.lo.y - rect.lo.y < margin - 1e-12 * mesh.h ||
      rect.hi.x - bb.hi.x < margin - 1e-12 * mesh.h ||
      rect.hi.y - bb.hi.y < margin - 1e-12 * mesh.h)
    throw std::runtime_error(
        "active_extract: domain too close to the mesh boundary; need at "
        "least p+1 element layers of margin");

  ActiveMesh am;
  am.space = &space;
  am.element_rank.assign(mesh.element_count(), -1);
  am.basis_rank.assign(space.basis_count(), -1);
  for (const CutCell &c : dom.cells()) {
    am.element_rank[c.element] = 1;  // mark; ranks assigned below
  }
  for (int e = 0; e < mesh.element_count(); ++e)
    if (am.element_rank[e] >= 0) {
      am.element_rank[e] = static_cast<int>(am.elements.size());
      am.elements.push_back(e);
    }
  std::vector<int> ids((p + 1) * (p + 1));
  for (int e : am.elements) {
    space.element_basis(e, ids.data());
    for (int g : ids) am.basis_rank[g] = 1;
  }
  for (int g = 0; g < space.basis_count(); ++g)
    if (am.basis_rank[g] >= 0) {
      am.basis_rank[g] = static_cast<int>(am.basis.size());
      am.basis.push_back(g);
    }
  return am;
}

double eval_spline(const ActiveMesh &am, const std::vector<double> &coeffs,
                   const Vec2 &x, Vec2 *grad) {
  const SplineSpace &sp = *am.space;
  const BackgroundMesh &mesh = sp.mesh();
  int ex = static_cast<int>(std::floor((x.x - mesh.origin.x) / mesh.h));
  int ey = static_cast<int>(std::floor((x.y - mesh.origin.y) / mesh.h));
  ex = std::max(0, std::min(mesh.nx - 1, ex));
  ey = std::max(0, std::min(mesh.ny - 1, ey));
  const int e = mesh.element_id(ex, ey);
  const int n = sp.degree() + 1;
  int ids[64];
  sp.element_basis(e, ids);
  double vals[64];
  Vec2 grads[64];
  const Vec2 s = mesh.to_local(e, x);
  sp.local().eval_all(s, vals, grad ? grads : nullptr);
  double v = 0.0;
  if (grad) *grad = {0.0, 0.0};
  for (int l = 0; l < n * n; ++l) {
    const int r = am.basis_rank[ids[l]];
    if (r < 0) continue;
    const double c = coeffs[r];
    v += c * vals[l];
    if (grad) {
      grad->x += c * grads[l].x / mesh.h;
      grad->y += c * grads[l].y / mesh.h;
    }
  }
  return v;
}

}  // namespace spx
