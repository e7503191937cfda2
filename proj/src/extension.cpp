#include "spx/extension.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace spx {

ExtensionPartition partition(const ActiveMesh &am, const TrimmedDomain &dom,
                             double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("partition: gamma must be >= 0");
  const BackgroundMesh &mesh = am.space->mesh();
  const double threshold = gamma * mesh.h * mesh.h;
  ExtensionPartition part;
  part.gamma = gamma;
  part.elem_is_large.assign(mesh.element_count(), 0);
  for (int e : am.elements) {
    if (threshold <= dom.cut_area(e)) {
      part.elem_is_large[e] = 1;
      part.large_elements.push_back(e);
    } else {
      part.small_elements.push_back(e);
    }
  }
  if (part.large_elements.empty())
    throw std::runtime_error("partition: no large elements; gamma too large for this mesh");
  part.basis_is_large.assign(am.space->basis_count(), 0);
  std::vector<int> ids(am.space->local().count());
  for (int e : part.large_elements) {
    am.space->element_basis(e, ids.data());
    for (int g : ids) part.basis_is_large[g] = 1;
  }
  for (int g : am.basis) {
    if (part.basis_is_large[g])
      part.basis_large.push_back(g);
    else
      part.basis_small.push_back(g);
  }
  return part;
}

void build_Sh(ExtensionPartition &part, const ActiveMesh &am,
              const TrimmedDomain &dom, int radius) {
  const BackgroundMesh &mesh = am.space->mesh();
  const int p = am.space->degree();
  if (radius <= 0) radius = p + 1;  // (2p+3)^2 neighborhood
  part.sh.assign(am.element_count(), -1);
  part.max_sh_diam_ratio = 0.0;

  // cut centroids of active elements
  std::vector<Vec2> centroid(am.element_count());
  for (int r = 0; r < am.element_count(); ++r) {
    const CutCell *c = dom.cell(am.elements[r]);
    if (c->cls == CellClass::Inside) {
      centroid[r] = mesh.element_center(c->element);
    } else {
      Vec2 num{0.0, 0.0};
      double den = 0.0;
      for (const auto &loop : c->clip) {
        const double a = polygon_area(loop);
        const Vec2 cc = polygon_centroid(loop);
        num += a * cc;
        den += a;
      }
      centroid[r] = num * (1.0 / den);
    }
  }

  auto consider = [&](int er_small, int e_large, int &best, double &best_d2) {
    const int rl = am.element_rank[e_large];
    const Vec2 d = centroid[rl] - centroid[er_small];
    const double d2 = d.dot(d);
    if (d2 < best_d2 - 1e-14 * mesh.h * mesh.h ||
        (std::abs(d2 - best_d2) <= 1e-14 * mesh.h * mesh.h && e_large < best)) {
      best_d2 = d2;
      best = e_large;
    }
  };

  for (int r = 0; r < am.element_count(); ++r) {
    const int e = am.elements[r];
    if (part.elem_is_large[e]) {
      part.sh[r] = e;
      continue;
    }
    const int ex = mesh.element_x(e), ey = mesh.element_y(e);
    int best = -1;
    double best_d2 = 1e300;
    for (int j = std::max(0, ey - radius); j <= std::min(mesh.ny - 1, ey + radius); ++j)
      for (int i = std::max(0, ex - radius); i <= std::min(mesh.nx - 1, ex + radius); ++i) {
        const int cand = mesh.element_id(i, j);
        if (part.elem_is_large[cand]) consider(r, cand, best, best_d2);
      }
    if (best < 0) {
      for (int cand : part.large_elements) consider(r, cand, best, best_d2);
    }
    part.sh[r] = best;
    // diameter of the union of the two elements, relative to h
    const int bx = mesh.element_x(best), by = mesh.element_y(best);
    const double dx = std::abs(bx - ex) + 1.0;
    const double dy = std::abs(by - ey) + 1.0;
    part.max_sh_diam_ratio =
        std::max(part.max_sh_diam_ratio, std::sqrt(dx * dx + dy * dy));
  }
  part.sh_built = true;
}

WeightScheme make_weights(WeightMode mode, const ActiveMesh &,
                          const ExtensionPartition &part) {
  WeightScheme w;
  w.mode = mode;
  w.restricted = true;
  w.elem_is_large = part.elem_is_large;
  w.basis_is_large = part.basis_is_large;
  return w;
}

std::vector<double> extension_block(const BasisLocal &local, int dx, int dy) {
  // Column j: coefficients (in the target element's local basis) of the
  // source basis polynomial j extended as a global polynomial. Cached per
  // (degree, offset) since the basis is translation invariant.
  static std::map<std::tuple<int, int, int>, std::vector<double>> cache;
  static std::mutex mtx;
  const auto key = std::make_tuple(local.degree(), dx, dy);
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const int nl = local.count();
  // V: columns are the monomial coefficients of the local basis.
  DenseMatrix V(nl, nl);
  for (int j = 0; j < nl; ++j) {
    const auto &c = local.local_poly(j).coef;
    for (int i = 0; i < nl; ++i) V(i, j) = c[i];
  }
  std::vector<double> X(std::size_t(nl) * nl, 0.0);
  // Source local coordinate s' relates to target coordinate s by
  // s' = s + (target - source) offset.
  const Vec2 delta{static_cast<double>(dx), static_cast<double>(dy)};
  for (int j = 0; j < nl; ++j) {
    const Poly2 shifted = local.local_poly(j).shifted(delta);
    auto col = V.solve_precise(shifted.coef);
    for (int i = 0; i < nl; ++i) X[std::size_t(i) * nl + j] = col[i];
  }
  std::lock_guard<std::mutex> lock(mtx);
  cache[key] = X;
  return X;
}

CoeffMatrix assemble_Bh(const ExtensionPartition &part, const ActiveMesh &am,
                        bool zero_small_columns) {
  if (!part.sh_built && !part.small_elements.empty())
    throw std::logic_error("assemble_Bh: S_h has not been built");
  const SplineSpace &space = *am.space;
  const BackgroundMesh &mesh = space.mesh();
  const BasisLocal &local = space.local();
  const DgSpace dg(am);
  const int nl = dg.block;
  std::vector<Triplet> trip;
  std::vector<int> ids(nl);
  for (int r = 0; r < am.element_count(); ++r) {
    const int e = am.elements[r];
    if (part.elem_is_large[e]) {
      space.element_basis(e, ids.data());
      for (int l = 0; l < nl; ++l) {
        const int bi = am.basis_rank[ids[l]];
        if (zero_small_columns && !part.basis_is_large[ids[l]]) continue;
        trip.push_back({dg.index(r, l), bi, 1.0});
      }
    } else {
      const int src = part.sh[r];
      const int ddx = mesh.element_x(e) - mesh.element_x(src);
      const int ddy = mesh.element_y(e) - mesh.element_y(src);
      const auto X = extension_block(local, ddx, ddy);
      space.element_basis(src, ids.data());
      for (int j = 0; j < nl; ++j) {
        const int bi = am.basis_rank[ids[j]];
        if (zero_small_columns && !part.basis_is_large[ids[j]]) continue;
        for (int i = 0; i < nl; ++i) {
          const double v = X[std::size_t(i) * nl + j];
          if (v != 0.0) trip.push_back({dg.index(r, i), bi, v});
        }
      }
    }
  }
  return CoeffMatrix::from_triplets(dg.dim(), am.dof_count(), std::move(trip));
}

CoeffMatrix assemble_Eh(const ExtensionPartition &part, const ActiveMesh &am,
                        const TrimmedDomain &dom, const WeightScheme &weights) {
  if (part.small_elements.empty()) {
    // Without small elements the extension is the identity.
    return CoeffMatrix::identity(am.dof_count());
  }
  const CoeffMatrix Ih = assemble_Ih(am, dom, weights);
  const CoeffMatrix Bh = assemble_Bh(part, am);
  const CoeffMatrix full = Ih.multiply(Bh);
  std::vector<int> cols(part.basis_large.size());
  for (std::size_t k = 0; k < part.basis_large.size(); ++k)
    cols[k] = am.basis_rank[part.basis_large[k]];
  return full.select_columns(cols);
}

std::vector<double> apply_Bh_dg(const ExtensionPartition &part,
                                const ActiveMesh &am,
                                const std::vector<double> &dg_in) {
  const SplineSpace &space = *am.space;
  const BackgroundMesh &mesh = space.mesh();
  const BasisLocal &local = space.local();
  const int nl = local.count();
  std::vector<double> out(dg_in.size(), 0.0);
  for (int r = 0; r < am.element_count(); ++r) {
    const int e = am.elements[r];
    const int src = part.elem_is_large[e] ? e : part.sh[r];
    const int rs = am.element_rank[src];
    if (src == e) {
      std::copy(dg_in.begin() + std::size_t(r) * nl,
                dg_in.begin() + std::size_t(r + 1) * nl,
                out.begin() + std::size_t(r) * nl);
      continue;
    }
    const int ddx = mesh.element_x(e) - mesh.element_x(src);
    const int ddy = mesh.element_y(e) - mesh.element_y(src);
    const auto X = extension_block(local, ddx, ddy);
    for (int i = 0; i < nl; ++i) {
      double s = 0.0;
      for (int j = 0; j < nl; ++j)
        s += X[std::size_t(i) * nl + j] * dg_in[std::size_t(rs) * nl + j];
      out[std::size_t(r) * nl + i] = s;
    }
  }
  return out;
}

ExtendedBasisStats extended_basis_stats(const ExtensionPartition &part,
                                        const ActiveMesh &am,
                                        const CoeffMatrix &Eh) {
  const SplineSpace &space = *am.space;
  const double h = space.mesh().h;
  const int ncols = Eh.cols();
  const CoeffMatrix Et = Eh.transpose();  // rows become extended functions
  ExtendedBasisStats stats;
  std::vector<BBox> boxes(ncols);
  for (int c = 0; c < ncols; ++c) {
    BBox box;
    bool first = true;
    double max_coef = 0.0;
    for (int k = Et.row_ptr()[c]; k < Et.row_ptr()[c + 1]; ++k) {
      const int g = am.basis[Et.col_idx()[k]];
      const BBox s = space.basis_support(g);
      if (first) { box = s; first = false; }
      else { box.expand(s.lo); box.expand(s.hi); }
      max_coef = std::max(max_coef, std::abs(Et.values()[k]));
    }
    boxes[c] = box;
    const double diam = std::hypot(box.hi.x - box.lo.x, box.hi.y - box.lo.y);
    stats.max_support_diam_ratio = std::max(stats.max_support_diam_ratio, diam / h);
    // sup-norm bound: coefficients times the partition-of-unity bound
    stats.max_sup_norm = std::max(stats.max_sup_norm, max_coef);
  }
  for (int c = 0; c < ncols; ++c) {
    int overlap = 0;
    for (int c2 = 0; c2 < ncols; ++c2) {
      const BBox &a = boxes[c], &b = boxes[c2];
      if (a.lo.x <= b.hi.x && b.lo.x <= a.hi.x && a.lo.y <= b.hi.y && b.lo.y <= a.hi.y)
        ++overlap;
    }
    stats.max_overlap = std::max(stats.max_overlap, overlap);
  }
  return stats;
}

}  // namespace spx
