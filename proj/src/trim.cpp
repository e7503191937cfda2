#include "spx/trim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spx {

namespace {

constexpr double kAreaFloorRel = 1e-14;

/// Liang-Barsky clip of segment a + t(b-a), t in [0,1], against a box.
/// Returns false if the intersection is empty.
bool clip_segment(const Vec2 &a, const Vec2 &b, const Vec2 &lo, const Vec2 &hi,
                  double &t0, double &t1) {
  t0 = 0.0;
  t1 = 1.0;
  const double d[4] = {-(b.x - a.x), b.x - a.x, -(b.y - a.y), b.y - a.y};
  const double q[4] = {a.x - lo.x, hi.x - a.x, a.y - lo.y, hi.y - a.y};
  for (int k = 0; k < 4; ++k) {
    if (d[k] == 0.0) {
      if (q[k] < 0.0) return false;
    } else {
      const double t = q[k] / d[k];
      if (d[k] < 0.0) {
        if (t > t1) return false;
        if (t > t0) t0 = t;
      } else {
        if (t < t0) return false;
        if (t < t1) t1 = t;
      }
    }
  }
  return t0 <= t1;
}

/// Perimeter coordinate on the box boundary, counterclockwise in units of
/// the side length: bottom [0,1), right [1,2), top [2,3), left [3,4).
double boundary_coord(const Vec2 &p, const Vec2 &lo, const Vec2 &hi) {
  const double side = hi.x - lo.x;
  const double db = std::abs(p.y - lo.y), dr = std::abs(p.x - hi.x);
  const double dt = std::abs(p.y - hi.y), dl = std::abs(p.x - lo.x);
  const double dmin = std::min(std::min(db, dr), std::min(dt, dl));
  double u;
  if (dmin == db)
    u = (p.x - lo.x) / side;
  else if (dmin == dr)
    u = 1.0 + (p.y - lo.y) / side;
  else if (dmin == dt)
    u = 2.0 + (hi.x - p.x) / side;
  else
    u = 3.0 + (hi.y - p.y) / side;
  if (u < 0.0) u = 0.0;
  if (u >= 4.0) u -= 4.0;
  return u;
}

Vec2 box_corner(int k, const Vec2 &lo, const Vec2 &hi) {
  switch (k & 3) {
    case 0: return lo;
    case 1: return {hi.x, lo.y};
    case 2: return hi;
    default: return {lo.x, hi.y};
  }
}

struct CurvePiece {
  std::vector<Vec2> pts;
  double u_entry = -1.0, u_exit = -1.0;
  bool has_entry = false, has_exit = false;
};

/// Portions of the closed polyline inside the box, split at box crossings.
/// `edges` lists polyline edge indices in increasing order; it must contain
/// every edge that meets the box.
std::vector<CurvePiece> collect_pieces(const Polygon &poly,
                                       const std::vector<int> &edges,
                                       const Vec2 &lo, const Vec2 &hi) {
  const int n = static_cast<int>(poly.size());
  const double side = hi.x - lo.x;
  const double tiny = 1e-13;

  // Start processing after a gap in the circular edge sequence so pieces
  // never straddle the processing seam; if the list covers all edges we
  // merge the wrap-around at the end instead.
  std::vector<int> order = edges;
  bool full_cover = static_cast<int>(order.size()) == n;
  if (!full_cover && order.size() > 1) {
    std::size_t brk = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const int cur = order[k];
      const int nxt = order[(k + 1) % order.size()];
      if ((nxt - cur + n) % n != 1) { brk = k + 1; break; }
    }
    std::rotate(order.begin(), order.begin() + static_cast<long>(brk % order.size()),
                order.end());
  }

  std::vector<CurvePiece> pieces;
  CurvePiece cur;
  bool open = false;
  int prev_edge = -10;
  auto close_piece = [&](const Vec2 &at, bool record_exit) {
    if (record_exit) {
      cur.u_exit = boundary_coord(at, lo, hi);
      cur.has_exit = true;
    }
    if (cur.pts.size() >= 2) pieces.push_back(std::move(cur));
    cur = CurvePiece{};
    open = false;
  };

  for (int e : order) {
    const Vec2 &a = poly[e];
    const Vec2 &b = poly[(e + 1) % n];
    double t0, t1;
    const bool hit = clip_segment(a, b, lo, hi, t0, t1);
    const bool contiguous = (e - prev_edge + n) % n == 1 || prev_edge == -10;
    if (open && (!contiguous || !hit || t0 > tiny)) {
      // previous run ended on the boundary
      close_piece(cur.pts.back(), true);
    }
    prev_edge = e;
    if (!hit || t1 - t0 < tiny * 1e-2) continue;
    const Vec2 p0 = a + t0 * (b - a);
    const Vec2 p1 = a + t1 * (b - a);
    if (!open) {
      open = true;
      cur = CurvePiece{};
      // An entry exists whenever the run begins on the box boundary; a run
      // beginning strictly inside (the polyline seam) has no entry and is
      // resolved by the wrap merge below.
      const bool on_boundary =
          std::abs(p0.x - lo.x) < tiny * side || std::abs(p0.x - hi.x) < tiny * side ||
          std::abs(p0.y - lo.y) < tiny * side || std::abs(p0.y - hi.y) < tiny * side;
      if (on_boundary) {
        cur.u_entry = boundary_coord(p0, lo, hi);
        cur.has_entry = true;
      }
      cur.pts.push_back(p0);
    }
    if ((p1 - cur.pts.back()).norm() > tiny * side) cur.pts.push_back(p1);
    if (t1 < 1.0 - tiny) close_piece(p1, true);
  }
  if (open) {
    if (pieces.empty()) {
      // the whole boundary stayed inside the box
      cur.has_entry = cur.has_exit = false;
      if (cur.pts.size() >= 2) pieces.push_back(std::move(cur));
    } else if (full_cover && !pieces.front().has_entry) {
      // wrap-around: prepend the open run to the first piece
      CurvePiece first = std::move(pieces.front());
      pieces.erase(pieces.begin());
      cur.pts.insert(cur.pts.end(), first.pts.begin(), first.pts.end());
      cur.u_exit = first.u_exit;
      cur.has_exit = first.has_exit;
      pieces.insert(pieces.begin(), std::move(cur));
    } else {
      close_piece(cur.pts.back(), cur.pts.size() >= 2);
    }
    open = false;
  }
  return pieces;
}

/// Stitches curve pieces and box-boundary walks into closed loops.
std::vector<Polygon> stitch_loops(const std::vector<CurvePiece> &pieces,
                                  const Vec2 &lo, const Vec2 &hi) {
  std::vector<Polygon> loops;
  if (pieces.size() == 1 && !pieces[0].has_entry && !pieces[0].has_exit) {
    loops.push_back(pieces[0].pts);  // whole boundary inside the box
    return loops;
  }
  const std::size_t np = pieces.size();
  std::vector<bool> used(np, false);
  // The next piece of a loop is the one whose entry follows the current
  // exit in counterclockwise boundary order; reaching a consumed piece
  // closes the loop.
  auto next_entry = [&](double u_from) {
    int best = -1;
    double best_du = 8.0;
    for (std::size_t k = 0; k < np; ++k) {
      if (!pieces[k].has_entry) continue;
      double du = pieces[k].u_entry - u_from;
      while (du <= 1e-12) du += 4.0;
      if (du < best_du) { best_du = du; best = static_cast<int>(k); }
    }
    return std::pair<int, double>(best, best_du);
  };
  for (std::size_t s = 0; s < np; ++s) {
    if (used[s] || !pieces[s].has_entry || !pieces[s].has_exit) continue;
    Polygon loop;
    int k = static_cast<int>(s);
    int guard = 0;
    while (true) {
      used[k] = true;
      loop.insert(loop.end(), pieces[k].pts.begin(), pieces[k].pts.end());
      const double u_x = pieces[k].u_exit;
      auto [knext, du] = next_entry(u_x);
      if (knext < 0) break;
      // box corners strictly between exit and the next entry
      for (int step = 1; step <= 4; ++step) {
        const double c_coord = std::floor(u_x) + step;
        const double off = c_coord - u_x;
        if (off >= du - 1e-12) break;
        loop.push_back(box_corner(static_cast<int>(c_coord) & 3, lo, hi));
      }
      if (knext == static_cast<int>(s)) break;  // loop closed
      if (used[knext]) break;                   // defensive: malformed input
      k = knext;
      if (++guard > static_cast<int>(np) + 4) break;
    }
    if (loop.size() >= 3) loops.push_back(std::move(loop));
  }
  return loops;
}

}  // namespace

TrimmedDomain::TrimmedDomain(const BoundaryCurve &curve, const BackgroundMesh &mesh,
                             const TrimOptions &opts)
    : mesh_(mesh), opts_(opts) {
  int segments = opts.boundary_segments;
  if (segments <= 0) {
    const double len = curve.length();
    segments = std::max(64, static_cast<int>(std::ceil(
                                opts.segments_per_crossing * len / mesh.h)));
  }
  polyline_ = curve.polyline(segments);
  build();
}

TrimmedDomain::TrimmedDomain(Polygon domain, const BackgroundMesh &mesh,
                             const TrimOptions &opts)
    : mesh_(mesh), opts_(opts), polyline_(std::move(domain)) {
  build();
}

CellClass TrimmedDomain::classification(int element) const {
  const int k = cell_index_[element];
  return k < 0 ? CellClass::Outside : cells_[k].cls;
}

const CutCell *TrimmedDomain::cell(int element) const {
  const int k = cell_index_[element];
  return k < 0 ? nullptr : &cells_[k];
}

double TrimmedDomain::cut_area(int element) const {
  const int k = cell_index_[element];
  return k < 0 ? 0.0 : cells_[k].area;
}

void TrimmedDomain::build() {
  if (polygon_area(polyline_) < 0.0)
    std::reverse(polyline_.begin(), polyline_.end());
  box_ = BBox::of(polyline_);
  const double h = mesh_.h;
  const int nx = mesh_.nx, ny = mesh_.ny;
  const int n = static_cast<int>(polyline_.size());
  cell_index_.assign(mesh_.element_count(), -1);

  // Bin polyline edges into the elements their bounding boxes touch.
  std::vector<std::vector<int>> edge_bins(mesh_.element_count());
  const double pad = 1e-12 * h;
  for (int e = 0; e < n; ++e) {
    const Vec2 &a = polyline_[e];
    const Vec2 &b = polyline_[(e + 1) % n];
    const double xlo = std::min(a.x, b.x) - pad, xhi = std::max(a.x, b.x) + pad;
    const double ylo = std::min(a.y, b.y) - pad, yhi = std::max(a.y, b.y) + pad;
    int i0 = static_cast<int>(std::floor((xlo - mesh_.origin.x) / h));
    int i1 = static_cast<int>(std::floor((xhi - mesh_.origin.x) / h));
    int j0 = static_cast<int>(std::floor((ylo - mesh_.origin.y) / h));
    int j1 = static_cast<int>(std::floor((yhi - mesh_.origin.y) / h));
    i0 = std::max(0, i0); j0 = std::max(0, j0);
    i1 = std::min(nx - 1, i1); j1 = std::min(ny - 1, j1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i)
        edge_bins[mesh_.element_id(i, j)].push_back(e);
  }

  // Scanline parity per element row for cells without boundary data.
  std::vector<std::vector<double>> row_crossings(ny);
  for (int j = 0; j < ny; ++j) {
    const double yc = mesh_.origin.y + (j + 0.5) * h;
    auto &xs = row_crossings[j];
    for (int e = 0; e < n; ++e) {
      const Vec2 &a = polyline_[e];
      const Vec2 &b = polyline_[(e + 1) % n];
      if ((a.y <= yc) != (b.y <= yc))
        xs.push_back(a.x + (yc - a.y) / (b.y - a.y) * (b.x - a.x));
    }
    std::sort(xs.begin(), xs.end());
  }
  auto center_inside = [&](int i, int j) {
    const double xc = mesh_.origin.x + (i + 0.5) * h;
    const auto &xs = row_crossings[j];
    const std::size_t c = std::upper_bound(xs.begin(), xs.end(), xc) - xs.begin();
    return ((xs.size() - c) % 2) == 1;
  };

  const double area_floor = kAreaFloorRel * h * h;
  const auto local_rule = tensor_gauss_01(opts_.quad_order);
  const QuadRule1D &g1 = gauss_legendre_01(opts_.quad_order);
  total_area_ = 0.0;

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int eid = mesh_.element_id(i, j);
      const Vec2 lo = mesh_.element_min(eid);
      const Vec2 hi = {lo.x + h, lo.y + h};
      CutCell cell;
      cell.element = eid;
      const auto &edges = edge_bins[eid];
      std::vector<CurvePiece> pieces;
      if (!edges.empty()) pieces = collect_pieces(polyline_, edges, lo, hi);

      if (pieces.empty()) {
        if (!center_inside(i, j)) continue;  // outside
        cell.cls = CellClass::Inside;
        cell.area = h * h;
        cell.clip.push_back({lo, {hi.x, lo.y}, hi, {lo.x, hi.y}});
        cell.vol_s.reserve(local_rule.size());
        cell.vol_w.reserve(local_rule.size());
        for (const auto &q : local_rule) {
          cell.vol_s.push_back(q.x);
          cell.vol_w.push_back(q.w * h * h);
        }
      } else {
        auto loops = stitch_loops(pieces, lo, hi);
        double area = 0.0;
        std::vector<Polygon> kept;
        for (auto &loop : loops) {
          const double a = polygon_area(loop);
          if (a > area_floor) {
            area += a;
            kept.push_back(std::move(loop));
          }
        }
        if (area <= area_floor || kept.empty()) continue;  // sliver noise: outside
        cell.cls = CellClass::Cut;
        cell.area = area;
        cell.clip = std::move(kept);
        for (const auto &loop : cell.clip) {
          for (const auto &tri : triangulate(loop)) {
            for (const auto &q : triangle_gauss(tri, opts_.quad_order)) {
              cell.vol_s.push_back(mesh_.to_local(eid, q.x));
              cell.vol_w.push_back(q.w);
            }
          }
        }
        for (const auto &piece : pieces) {
          for (std::size_t k = 0; k + 1 < piece.pts.size(); ++k) {
            const Vec2 &a = piece.pts[k];
            const Vec2 &b = piece.pts[k + 1];
            const Vec2 d = b - a;
            const double len = d.norm();
            if (len < 1e-14 * h) continue;
            const Vec2 normal{d.y / len, -d.x / len};
            for (std::size_t q = 0; q < g1.points.size(); ++q) {
              const Vec2 x = a + g1.points[q] * d;
              cell.bnd_s.push_back(mesh_.to_local(eid, x));
              cell.bnd_w.push_back(g1.weights[q] * len);
              cell.bnd_n.push_back(normal);
            }
          }
        }
      }
      total_area_ += cell.area;
      cell_index_[eid] = static_cast<int>(cells_.size());
      cells_.push_back(std::move(cell));
    }
  }
}

TrimmedDomain classify_and_clip(const BoundaryCurve &curve,
                                const BackgroundMesh &mesh, int quad_order) {
  TrimOptions opts;
  opts.quad_order = quad_order;
  return TrimmedDomain(curve, mesh, opts);
}

}  // namespace spx
