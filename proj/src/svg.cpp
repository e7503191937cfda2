#include "spx/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spx {

namespace {

const char *kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

double LogLogPlot::Mapped::x_to_px(double x) const {
  const double lx = std::log10(x);
  return margin + (lx - px0) / (px1 - px0) * (width - 2 * margin);
}

double LogLogPlot::Mapped::y_to_px(double y) const {
  const double ly = std::log10(y);
  return height - margin - (ly - py0) / (py1 - py0) * (height - 2 * margin);
}

LogLogPlot::Mapped LogLogPlot::mapping() const {
  Mapped m{0.0, 1.0, 0.0, 1.0};
  bool first = true;
  for (const auto &s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      const double lx = std::log10(s.x[i]), ly = std::log10(s.y[i]);
      if (first) {
        m.px0 = m.px1 = lx;
        m.py0 = m.py1 = ly;
        first = false;
      } else {
        m.px0 = std::min(m.px0, lx); m.px1 = std::max(m.px1, lx);
        m.py0 = std::min(m.py0, ly); m.py1 = std::max(m.py1, ly);
      }
    }
  if (first) throw std::runtime_error("LogLogPlot: no positive data to plot");
  if (m.px1 - m.px0 < 1e-9) { m.px0 -= 0.5; m.px1 += 0.5; }
  if (m.py1 - m.py0 < 1e-9) { m.py0 -= 0.5; m.py1 += 0.5; }
  const double padx = 0.04 * (m.px1 - m.px0), pady = 0.06 * (m.py1 - m.py0);
  m.px0 -= padx; m.px1 += padx;
  m.py0 -= pady; m.py1 += pady;
  return m;
}

std::string LogLogPlot::render() const {
  const Mapped m = mapping();
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << m.width
     << "\" height=\"" << m.height << "\" viewBox=\"0 0 " << m.width << " "
     << m.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << m.margin << "\" y=\"" << m.margin << "\" width=\""
     << m.width - 2 * m.margin << "\" height=\"" << m.height - 2 * m.margin
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << m.width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        "font-size=\"15\">" << title << "</text>\n";
  os << "<text x=\"" << m.width / 2 << "\" y=\"" << m.height - 12
     << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel << "</text>\n";
  os << "<text x=\"16\" y=\"" << m.height / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
     << m.height / 2 << ")\">" << ylabel << "</text>\n";

  // decade ticks
  for (int d = static_cast<int>(std::ceil(m.px0)); d <= std::floor(m.px1); ++d) {
    const double px = m.x_to_px(std::pow(10.0, d));
    os << "<line x1=\"" << fmt(px) << "\" y1=\"" << m.height - m.margin
       << "\" x2=\"" << fmt(px) << "\" y2=\"" << m.margin
       << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << fmt(px) << "\" y=\"" << m.height - m.margin + 16
       << "\" text-anchor=\"middle\" font-size=\"11\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(m.py0)); d <= std::floor(m.py1); ++d) {
    const double py = m.y_to_px(std::pow(10.0, d));
    os << "<line x1=\"" << m.margin << "\" y1=\"" << fmt(py) << "\" x2=\""
       << m.width - m.margin << "\" y2=\"" << fmt(py)
       << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << m.margin - 6 << "\" y=\"" << fmt(py + 4)
       << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";
  }

  // reference slope guides anchored at the first series' last point
  if (!series.empty() && !series[0].x.empty()) {
    for (const auto &g : guides) {
      const auto &s = series[0];
      const double x1 = s.x.back(), y1 = s.y.back();
      const double x0 = s.x.front();
      const double y0 = y1 * std::pow(x0 / x1, g.slope);
      os << "<line x1=\"" << fmt(m.x_to_px(x0)) << "\" y1=\"" << fmt(m.y_to_px(y0))
         << "\" x2=\"" << fmt(m.x_to_px(x1)) << "\" y2=\"" << fmt(m.y_to_px(y1))
         << "\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n";
      os << "<text x=\"" << fmt(m.x_to_px(x0) + 4) << "\" y=\""
         << fmt(m.y_to_px(y0) - 4) << "\" font-size=\"11\" fill=\"#555555\">"
         << g.label << "</text>\n";
    }
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto &s = series[si];
    const char *col = kSeriesColors[si % 8];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      os << fmt(m.x_to_px(s.x[i])) << "," << fmt(m.y_to_px(s.y[i])) << " ";
    os << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      os << "<circle cx=\"" << fmt(m.x_to_px(s.x[i])) << "\" cy=\""
         << fmt(m.y_to_px(s.y[i])) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
    os << "<text x=\"" << m.width - m.margin + 6 << "\" y=\""
       << m.margin + 16 * (si + 1) << "\" font-size=\"11\" fill=\"" << col << "\">"
       << s.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void LogLogPlot::write(const std::string &path) const {
  const std::string svg = render();  // may throw before the file is created
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << svg;
}

namespace {

struct CellCanvas {
  double x0, y0, scale, width, height;
  explicit CellCanvas(const BackgroundMesh &mesh) {
    const BBox r = mesh.rect();
    x0 = r.lo.x;
    y0 = r.lo.y;
    scale = 760.0 / std::max(r.hi.x - r.lo.x, r.hi.y - r.lo.y);
    width = (r.hi.x - r.lo.x) * scale + 40.0;
    height = (r.hi.y - r.lo.y) * scale + 40.0;
  }
  double px(double x) const { return 20.0 + (x - x0) * scale; }
  double py(double y, const BackgroundMesh &mesh) const {
    return height - 20.0 - (y - y0) * scale;
  }
};

}  // namespace

std::string render_partition_svg(const ActiveMesh &am, const TrimmedDomain &dom,
                                 const ExtensionPartition &part) {
  const BackgroundMesh &mesh = am.space->mesh();
  CellCanvas cv(mesh);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cv.width
     << "\" height=\"" << cv.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int e : am.elements) {
    const Vec2 lo = mesh.element_min(e);
    const char *fill = part.elem_is_large[e] ? "#b6a9d4" : "#f2b8cb";
    os << "<rect x=\"" << fmt(cv.px(lo.x)) << "\" y=\""
       << fmt(cv.py(lo.y + mesh.h, mesh)) << "\" width=\"" << fmt(mesh.h * cv.scale)
       << "\" height=\"" << fmt(mesh.h * cv.scale) << "\" fill=\"" << fill
       << "\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n";
  }
  const Polygon &poly = dom.boundary_polyline();
  os << "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"1.2\" points=\"";
  for (const auto &p : poly) os << fmt(cv.px(p.x)) << "," << fmt(cv.py(p.y, mesh)) << " ";
  os << "\"/>\n";
  if (part.sh_built) {
    for (int r = 0; r < am.element_count(); ++r) {
      const int e = am.elements[r];
      if (part.elem_is_large[e]) continue;
      const Vec2 a = mesh.element_center(e);
      const Vec2 b = mesh.element_center(part.sh[r]);
      os << "<line x1=\"" << fmt(cv.px(a.x)) << "\" y1=\"" << fmt(cv.py(a.y, mesh))
         << "\" x2=\"" << fmt(cv.px(b.x)) << "\" y2=\"" << fmt(cv.py(b.y, mesh))
         << "\" stroke=\"#d62728\" stroke-width=\"1\" marker-end=\"url(#ar)\"/>\n";
    }
    os << "<defs><marker id=\"ar\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" "
          "refY=\"3\" orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"#d62728\"/>"
          "</marker></defs>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_extended_basis_svg(const ActiveMesh &am, const TrimmedDomain &dom,
                                      const ExtensionPartition &part,
                                      const CoeffMatrix &Eh, int column) {
  const SplineSpace &space = *am.space;
  const BackgroundMesh &mesh = space.mesh();
  CellCanvas cv(mesh);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cv.width
     << "\" height=\"" << cv.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const int g_large = part.basis_large[column];
  auto draw_support = [&](int g, const char *fill, double opacity) {
    const BBox s = space.basis_support(g);
    os << "<rect x=\"" << fmt(cv.px(s.lo.x)) << "\" y=\"" << fmt(cv.py(s.hi.y, mesh))
       << "\" width=\"" << fmt((s.hi.x - s.lo.x) * cv.scale) << "\" height=\""
       << fmt((s.hi.y - s.lo.y) * cv.scale) << "\" fill=\"" << fill
       << "\" fill-opacity=\"" << opacity << "\"/>\n";
  };
  const CoeffMatrix Et = Eh.transpose();
  for (int k = Et.row_ptr()[column]; k < Et.row_ptr()[column + 1]; ++k) {
    const int g = am.basis[Et.col_idx()[k]];
    if (g == g_large) continue;
    draw_support(g, part.basis_is_large[g] ? "#9ecae1" : "#fbb4c9", 0.5);
    const BBox s = space.basis_support(g);
    const Vec2 c{0.5 * (s.lo.x + s.hi.x), 0.5 * (s.lo.y + s.hi.y)};
    os << "<circle cx=\"" << fmt(cv.px(c.x)) << "\" cy=\"" << fmt(cv.py(c.y, mesh))
       << "\" r=\"3\" fill=\"none\" stroke=\"black\"/>\n";
  }
  draw_support(g_large, "#6baed6", 0.65);
  {
    const BBox s = space.basis_support(g_large);
    const Vec2 c{0.5 * (s.lo.x + s.hi.x), 0.5 * (s.lo.y + s.hi.y)};
    os << "<rect x=\"" << fmt(cv.px(c.x) - 3) << "\" y=\"" << fmt(cv.py(c.y, mesh) - 3)
       << "\" width=\"6\" height=\"6\" fill=\"black\"/>\n";
  }
  for (int ge = 0; ge < mesh.nx; ++ge) {
    // grid lines
    const double x = mesh.origin.x + ge * mesh.h;
    os << "<line x1=\"" << fmt(cv.px(x)) << "\" y1=\"" << fmt(cv.py(mesh.origin.y, mesh))
       << "\" x2=\"" << fmt(cv.px(x)) << "\" y2=\""
       << fmt(cv.py(mesh.origin.y + mesh.ny * mesh.h, mesh))
       << "\" stroke=\"#eeeeee\" stroke-width=\"0.4\"/>\n";
  }
  const Polygon &poly = dom.boundary_polyline();
  os << "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  for (const auto &p : poly) os << fmt(cv.px(p.x)) << "," << fmt(cv.py(p.y, mesh)) << " ";
  os << "\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace spx
