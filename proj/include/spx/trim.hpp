#ifndef SPX_TRIM_HPP
#define SPX_TRIM_HPP

#include <vector>

#include "spx/curve.hpp"
#include "spx/geometry.hpp"
#include "spx/mesh.hpp"
#include "spx/quadrature.hpp"

namespace spx {

enum class CellClass { Outside = 0, Inside = 1, Cut = 2 };

/// Intersection data of one background element with the domain.
/// Quadrature points are stored in element-local coordinates; volume
/// weights carry the area measure, boundary weights the arc length.
struct CutCell {
  int element = -1;
  CellClass cls = CellClass::Outside;
  std::vector<Polygon> clip;  // components of T ∩ Ω, counterclockwise, global
  double area = 0.0;
  std::vector<Vec2> vol_s;
  std::vector<double> vol_w;
  std::vector<Vec2> bnd_s;
  std::vector<double> bnd_w;
  std::vector<Vec2> bnd_n;  // unit normals pointing out of Ω
};

struct TrimOptions {
  int quad_order = 4;             // Gauss points per direction / per segment
  int segments_per_crossing = 8;  // polyline resolution per crossed element
  int boundary_segments = 0;      // absolute override when > 0
};

/// Per-element classification of a trimmed domain: clip polygons, areas,
/// volume and boundary quadrature. Immutable after construction.
class TrimmedDomain {
 public:
  TrimmedDomain(const BoundaryCurve &curve, const BackgroundMesh &mesh,
                const TrimOptions &opts);
  /// Domain given directly as a closed polygon (any orientation).
  TrimmedDomain(Polygon domain, const BackgroundMesh &mesh, const TrimOptions &opts);

  const BackgroundMesh &mesh() const { return mesh_; }
  CellClass classification(int element) const;
  /// Cell data for inside/cut elements; nullptr for outside elements.
  const CutCell *cell(int element) const;
  const std::vector<CutCell> &cells() const { return cells_; }
  double cut_area(int element) const;
  double total_area() const { return total_area_; }
  const Polygon &boundary_polyline() const { return polyline_; }
  BBox domain_box() const { return box_; }
  bool point_inside(const Vec2 &p) const { return point_in_polygon(p, polyline_); }
  int quad_order() const { return opts_.quad_order; }

 private:
  void build();

  BackgroundMesh mesh_;
  TrimOptions opts_;
  Polygon polyline_;
  BBox box_;
  std::vector<int> cell_index_;  // by element id; -1 for outside
  std::vector<CutCell> cells_;
  double total_area_ = 0.0;
};

/// Classifies every element of the mesh against the curve and equips
/// inside/cut cells with quadrature rules.
TrimmedDomain classify_and_clip(const BoundaryCurve &curve,
                                const BackgroundMesh &mesh, int quad_order);

}  // namespace spx

#endif
