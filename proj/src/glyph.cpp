#include "subspace_lens/glyph.hpp"

#include "subspace_lens/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace subspace_lens {

std::string to_string(GlyphShape shape) {
  switch (shape) {
    case GlyphShape::kSpline: return "spline";
    case GlyphShape::kCapsule: return "capsule";
    case GlyphShape::kCircle: return "circle";
  }
  return "spline";
}

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

Polygon2 circle(double radius, int samples) {
  Polygon2 out;
  for (int s = 0; s < samples; ++s) {
    const double t = 2.0 * std::numbers::pi * s / samples;
    out.emplace_back(radius * std::cos(t), radius * std::sin(t));
  }
  return out;
}

// Stadium around segment [a, b]; CCW, not closed.
Polygon2 capsule(const Point2& a, const Point2& b, double half_width, int samples) {
  const Point2 axis = (b - a).normalized();
  const double base = std::atan2(axis.y(), axis.x());
  const int half = std::max(samples / 2, 2);
  Polygon2 out;
  for (int s = 0; s <= half; ++s) {
    const double t = base - std::numbers::pi / 2 + std::numbers::pi * s / half;
    out.push_back(b + half_width * Point2(std::cos(t), std::sin(t)));
  }
  for (int s = 0; s <= half; ++s) {
    const double t = base + std::numbers::pi / 2 + std::numbers::pi * s / half;
    out.push_back(a + half_width * Point2(std::cos(t), std::sin(t)));
  }
  return out;
}

Polygon2 close(Polygon2 poly) {
  if (!poly.empty()) poly.push_back(poly.front());
  return poly;
}

}  // namespace

Polygon2 convex_hull(Polygon2 points) {
  std::sort(points.begin(), points.end(), [](const Point2& a, const Point2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;

  Polygon2 hull(2 * points.size());
  std::size_t k = 0;
  for (const Point2& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const Point2& p = points[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

Polygon2 build_hull(const Eigen::MatrixXd& vectors, bool one_sided, double mag_eps) {
  if (vectors.cols() != 2) throw ValidationError("glyph vectors must be 2D");
  Polygon2 points;
  if (one_sided) points.emplace_back(0.0, 0.0);
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    const Point2 v = vectors.row(i).transpose();
    if (v.norm() <= mag_eps) continue;
    points.push_back(v);
    if (!one_sided) points.push_back(-v);
  }
  return convex_hull(std::move(points));
}

Polygon2 build_outline(const Polygon2& hull, int samples_per_segment) {
  const std::size_t n = hull.size();
  if (n < 3) throw ValidationError("B-spline outline needs at least 3 control points");
  if (samples_per_segment < 1) throw ValidationError("samples per segment must be >= 1");
  Polygon2 out;
  out.reserve(n * static_cast<std::size_t>(samples_per_segment) + 1);
  for (std::size_t seg = 0; seg < n; ++seg) {
    const Point2& p0 = hull[(seg + n - 1) % n];
    const Point2& p1 = hull[seg];
    const Point2& p2 = hull[(seg + 1) % n];
    const Point2& p3 = hull[(seg + 2) % n];
    for (int s = 0; s < samples_per_segment; ++s) {
      const double t = static_cast<double>(s) / samples_per_segment;
      const double t2 = t * t;
      const double t3 = t2 * t;
      const double u = 1.0 - t;
      const double b0 = u * u * u / 6.0;
      const double b1 = (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0;
      const double b2 = (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0;
      const double b3 = t3 / 6.0;
      out.push_back(b0 * p0 + b1 * p1 + b2 * p2 + b3 * p3);
    }
  }
  return close(std::move(out));
}

double polygon_area(const Polygon2& polygon) {
  double twice = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = polygon[i];
    const Point2& b = polygon[(i + 1) % n];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return std::abs(0.5 * twice);
}

double outline_aspect(const Polygon2& outline) {
  const Polygon2 hull = convex_hull(outline);
  const std::size_t n = hull.size();
  if (n < 2) return 1.0;
  double diameter = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) diameter = std::max(diameter, (hull[i] - hull[j]).norm());
  }
  if (n < 3) return 1e12;
  double min_width = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 edge = hull[(i + 1) % n] - hull[i];
    const double len = edge.norm();
    if (len == 0.0) continue;
    double width = 0.0;
    for (const Point2& p : hull) {
      width = std::max(width, std::abs(cross(hull[i], hull[(i + 1) % n], p)) / len);
    }
    min_width = std::min(min_width, width);
  }
  if (!(min_width > 0.0)) return 1e12;
  return std::max(1.0, diameter / min_width);
}

bool point_in_convex_polygon(const Polygon2& polygon, const Point2& p, double tol) {
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = polygon[i];
    const Point2& b = polygon[(i + 1) % n];
    const double len = (b - a).norm();
    if (len == 0.0) continue;
    if (cross(a, b, p) / len < -tol) return false;
  }
  return true;
}

Glyph build_glyph(int anchor, int row_id, const Point2& center, const Eigen::MatrixXd& vectors,
                  const GlyphOptions& options) {
  Glyph g;
  g.anchor = anchor;
  g.row_id = row_id;
  g.center = center;

  Polygon2 hull = build_hull(vectors, options.one_sided, options.mag_eps);
  if (hull.size() >= 3) {
    g.shape = GlyphShape::kSpline;
    g.hull = std::move(hull);
    g.outline = build_outline(g.hull, options.samples_per_segment);
  } else if (hull.empty() || (hull.size() == 1 && hull.front().norm() <= options.mag_eps) ||
             (hull.size() == 2 && (hull[0] - hull[1]).norm() <= options.mag_eps)) {
    g.shape = GlyphShape::kCircle;
    g.hull = circle(options.r_min, options.fallback_samples);
    g.outline = close(g.hull);
    g.flags.push_back("point_glyph");
    g.reasons.push_back("all transformed vectors are shorter than " +
                        std::to_string(options.mag_eps) + "; drawn as a circle");
  } else {
    const Point2 a = hull.front();
    const Point2 b = hull.size() == 2 ? hull.back() : Point2(Point2::Zero());
    g.shape = GlyphShape::kCapsule;
    g.hull = capsule(a, b, options.r_min, options.fallback_samples);
    g.outline = close(g.hull);
    g.flags.push_back("capsule");
    g.reasons.push_back("transformed vectors are collinear; drawn as a capsule of half-width " +
                        std::to_string(options.r_min));
  }
  g.area = polygon_area(g.outline);
  g.aspect = outline_aspect(g.outline);
  return g;
}

void rank_glyphs(std::vector<Glyph>& glyphs) {
  std::vector<std::size_t> order(glyphs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (glyphs[a].area != glyphs[b].area) return glyphs[a].area > glyphs[b].area;
    return glyphs[a].row_id < glyphs[b].row_id;
  });
  for (std::size_t r = 0; r < order.size(); ++r) glyphs[order[r]].draw_rank = static_cast<int>(r);
}

double glyph_scale_factor(const std::vector<Eigen::MatrixXd>& vectors, double diameter,
                          double user_scale) {
  std::vector<double> radii;
  for (const auto& v : vectors) {
    const double r = v.rows() > 0 ? v.rowwise().norm().maxCoeff() : 0.0;
    if (r > 0.0) radii.push_back(r);
  }
  if (radii.empty() || !(diameter > 0.0)) return user_scale;
  const auto mid = radii.begin() + static_cast<std::ptrdiff_t>(radii.size() / 2);
  std::nth_element(radii.begin(), mid, radii.end());
  return user_scale * 0.01 * diameter / *mid;
}

}  // namespace subspace_lens
