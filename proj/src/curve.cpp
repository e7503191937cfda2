#include "spx/curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "spx/linalg.hpp"

namespace spx {

BoundaryCurve::BoundaryCurve(std::vector<double> thetas, std::vector<Vec2> points,
                             double period)
    : period_(period) {
  if (thetas.size() != points.size() || thetas.size() < 3)
    throw std::invalid_argument("BoundaryCurve: need at least 3 (theta, point) records");
  if (period <= 0.0) throw std::invalid_argument("BoundaryCurve: period must be positive");

  // Fold parameters into [base, base + period), sort, drop closure repeats.
  const double base = *std::min_element(thetas.begin(), thetas.end());
  std::vector<std::size_t> order(thetas.size());
  std::iota(order.begin(), order.end(), 0);
  for (auto &t : thetas) {
    t = std::fmod(t - base, period);
    if (t < 0.0) t += period;
    t += base;
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return thetas[a] < thetas[b]; });
  for (std::size_t k : order) {
    const double t = thetas[k];
    if (!thetas_.empty() && std::abs(t - thetas_.back()) < 1e-12) {
      if ((points[k] - points_.back()).norm() > 1e-9)
        throw std::invalid_argument(
            "BoundaryCurve: coincident parameters with different points");
      continue;
    }
    thetas_.push_back(t);
    points_.push_back(points[k]);
  }
  const int n = static_cast<int>(points_.size());
  if (n < 3) throw std::invalid_argument("BoundaryCurve: fewer than 3 distinct nodes");

  // Periodic C^2 spline: solve the cyclic tridiagonal moment system.
  auto hseg = [&](int m) {
    const double a = thetas_[m % n] + (m >= n ? period_ : 0.0);
    const double b = thetas_[(m + 1) % n] + ((m + 1) >= n ? period_ : 0.0);
    return b - a;
  };
  DenseMatrix A(n, n);
  std::vector<double> rx(n), ry(n);
  for (int m = 0; m < n; ++m) {
    const int prev = (m + n - 1) % n;
    const double h_prev = hseg(prev);
    const double hm = hseg(m);
    A(m, prev) += h_prev / 6.0;
    A(m, m) += (h_prev + hm) / 3.0;
    A(m, (m + 1) % n) += hm / 6.0;
    const Vec2 dnext = (points_[(m + 1) % n] - points_[m]) * (1.0 / hm);
    const Vec2 dprev = (points_[m] - points_[prev]) * (1.0 / h_prev);
    rx[m] = dnext.x - dprev.x;
    ry[m] = dnext.y - dprev.y;
  }
  const auto mx = A.solve(rx);
  const auto my = A.solve(ry);
  moments_.resize(n);
  for (int m = 0; m < n; ++m) moments_[m] = {mx[m], my[m]};
}

int BoundaryCurve::find_interval(double t) const {
  const int n = static_cast<int>(thetas_.size());
  auto it = std::upper_bound(thetas_.begin(), thetas_.end(), t);
  int m = static_cast<int>(it - thetas_.begin()) - 1;
  if (m < 0) m = n - 1;
  return m;
}

Vec2 BoundaryCurve::position(double t) const {
  const int n = static_cast<int>(thetas_.size());
  const double base = thetas_.front();
  t = std::fmod(t - base, period_);
  if (t < 0.0) t += period_;
  t += base;
  const int m = find_interval(t);
  const int m1 = (m + 1) % n;
  const double t0 = thetas_[m];
  const double t1 = (m1 == 0) ? thetas_[0] + period_ : thetas_[m1];
  const double h = t1 - t0;
  const double B = (t - t0) / h, A = 1.0 - B;
  const double h26 = h * h / 6.0;
  return {A * points_[m].x + B * points_[m1].x +
              ((A * A * A - A) * moments_[m].x + (B * B * B - B) * moments_[m1].x) * h26,
          A * points_[m].y + B * points_[m1].y +
              ((A * A * A - A) * moments_[m].y + (B * B * B - B) * moments_[m1].y) * h26};
}

Vec2 BoundaryCurve::tangent(double t) const {
  const int n = static_cast<int>(thetas_.size());
  const double base = thetas_.front();
  t = std::fmod(t - base, period_);
  if (t < 0.0) t += period_;
  t += base;
  const int m = find_interval(t);
  const int m1 = (m + 1) % n;
  const double t0 = thetas_[m];
  const double t1 = (m1 == 0) ? thetas_[0] + period_ : thetas_[m1];
  const double h = t1 - t0;
  const double B = (t - t0) / h, A = 1.0 - B;
  const double h6 = h / 6.0;
  return {(points_[m1].x - points_[m].x) / h +
              (-(3.0 * A * A - 1.0) * moments_[m].x + (3.0 * B * B - 1.0) * moments_[m1].x) * h6,
          (points_[m1].y - points_[m].y) / h +
              (-(3.0 * A * A - 1.0) * moments_[m].y + (3.0 * B * B - 1.0) * moments_[m1].y) * h6};
}

Vec2 BoundaryCurve::outward_normal(double t) const {
  const Vec2 tg = tangent(t);
  const double len = tg.norm();
  return {tg.y / len, -tg.x / len};
}

Polygon BoundaryCurve::polyline(int segments) const {
  if (segments < 3) throw std::invalid_argument("polyline: need at least 3 segments");
  const int fine = std::max(segments * 4, 8192);
  std::vector<double> ts(fine + 1), arc(fine + 1, 0.0);
  Vec2 prev = position(t_begin());
  ts[0] = t_begin();
  for (int i = 1; i <= fine; ++i) {
    ts[i] = t_begin() + period_ * i / fine;
    const Vec2 p = position(ts[i]);
    arc[i] = arc[i - 1] + (p - prev).norm();
    prev = p;
  }
  Polygon poly(segments);
  int j = 0;
  for (int k = 0; k < segments; ++k) {
    const double target = arc[fine] * k / segments;
    while (j < fine && arc[j + 1] < target) ++j;
    const double denom = arc[j + 1] - arc[j];
    const double w = denom > 0.0 ? (target - arc[j]) / denom : 0.0;
    poly[k] = position(ts[j] + w * (ts[j + 1] - ts[j]));
  }
  return poly;
}

double BoundaryCurve::length(int samples) const {
  double len = 0.0;
  Vec2 prev = position(t_begin());
  for (int i = 1; i <= samples; ++i) {
    const Vec2 p = position(t_begin() + period_ * i / samples);
    len += (p - prev).norm();
    prev = p;
  }
  return len;
}

BBox BoundaryCurve::bounding_box(int samples) const {
  BBox b;
  b.lo = b.hi = position(t_begin());
  for (int i = 1; i < samples; ++i)
    b.expand(position(t_begin() + period_ * i / samples));
  return b;
}

namespace {

bool segments_intersect(const Vec2 &a, const Vec2 &b, const Vec2 &c, const Vec2 &d) {
  const double d1 = (b - a).cross(c - a);
  const double d2 = (b - a).cross(d - a);
  const double d3 = (d - c).cross(a - c);
  const double d4 = (d - c).cross(b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

bool BoundaryCurve::is_simple(int segments) const {
  const Polygon poly = polyline(segments);
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent around the wrap
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
        return false;
    }
  }
  return true;
}

BoundaryCurve bean_domain() {
  const double pi = M_PI;
  std::vector<double> th = {0.0, -pi / 2, pi / 20, pi / 4, pi / 2, pi, 3 * pi / 2, 0.0};
  std::vector<Vec2> pts = {{1.0, 0.0}, {0.0, -0.8}, {0.7, -0.1}, {0.1, 0.1},
                           {-0.3, 0.7}, {-0.8, 0.0}, {0.0, -0.8}, {1.0, 0.0}};
  return BoundaryCurve(std::move(th), std::move(pts), 2 * pi);
}

BoundaryCurve circle_domain(const Vec2 &center, double radius, int n) {
  std::vector<double> th(n);
  std::vector<Vec2> pts(n);
  for (int i = 0; i < n; ++i) {
    th[i] = 2.0 * M_PI * i / n;
    pts[i] = {center.x + radius * std::cos(th[i]), center.y + radius * std::sin(th[i])};
  }
  return BoundaryCurve(std::move(th), std::move(pts), 2 * M_PI);
}

BoundaryCurve curve_from_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open boundary file: " + path);
  nlohmann::json j;
  in >> j;
  double period = 2.0 * M_PI;
  const nlohmann::json *records = &j;
  if (j.is_object()) {
    if (j.contains("period")) period = j["period"].get<double>();
    if (!j.contains("points"))
      throw std::runtime_error("boundary JSON object needs a \"points\" array");
    records = &j["points"];
  }
  std::vector<double> th;
  std::vector<Vec2> pts;
  for (const auto &r : *records) {
    th.push_back(r.at("theta").get<double>());
    pts.push_back({r.at("x").get<double>(), r.at("y").get<double>()});
  }
  return BoundaryCurve(std::move(th), std::move(pts), period);
}

}  // namespace spx
