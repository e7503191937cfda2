#ifndef SPX_SVG_HPP
#define SPX_SVG_HPP

#include <string>
#include <vector>

#include "spx/extension.hpp"
#include "spx/geometry.hpp"
#include "spx/mesh.hpp"
#include "spx/trim.hpp"

namespace spx {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

struct GuideLine {
  double slope = 0.0;   // in log-log coordinates
  std::string label;
};

struct LogLogPlot {
  std::string title, xlabel, ylabel;
  std::vector<PlotSeries> series;
  std::vector<GuideLine> guides;

  /// Pixel coordinates the renderer will use; exposed for testing.
  struct Mapped {
    double px0, px1, py0, py1;  // data range in log10
    double width = 640.0, height = 480.0, margin = 64.0;
    double x_to_px(double x) const;
    double y_to_px(double y) const;
  };
  Mapped mapping() const;

  std::string render() const;
  void write(const std::string &path) const;
};

/// Partition/association debug figure: active cells shaded by class,
/// boundary polyline, and S_h arrows from small to large cut centroids.
std::string render_partition_svg(const ActiveMesh &am, const TrimmedDomain &dom,
                                 const ExtensionPartition &part);

/// Support footprint of one extended basis function: the original support
/// and the supports reached through the extension, from the E_h column.
std::string render_extended_basis_svg(const ActiveMesh &am, const TrimmedDomain &dom,
                                      const ExtensionPartition &part,
                                      const CoeffMatrix &Eh, int column);

}  // namespace spx

#endif
