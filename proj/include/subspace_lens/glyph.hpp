#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace subspace_lens {

using Point2 = Eigen::Vector2d;
using Polygon2 = std::vector<Point2>;

enum class GlyphShape { kSpline, kCapsule, kCircle };

std::string to_string(GlyphShape shape);

struct GlyphOptions {
  int samples_per_segment = 16;
  /// Half-width of capsule fallbacks and radius of circle fallbacks.
  double r_min = 0.005;
  /// Vectors shorter than this count as zero.
  double mag_eps = 1e-12;
  /// Literal construction: hull of the vector tips and the center only.
  bool one_sided = false;
  int fallback_samples = 64;
};

/// Glyph geometry is stored relative to `center`.
struct Glyph {
  int anchor = 0;
  int row_id = 0;
  Point2 center = Point2::Zero();
  Polygon2 hull;     // CCW control polygon
  Polygon2 outline;  // closed: front() == back()
  double area = 0.0;
  double aspect = 1.0;
  int draw_rank = 0;
  GlyphShape shape = GlyphShape::kSpline;
  std::vector<std::string> flags;
  std::vector<std::string> reasons;
};

/// Andrew's monotone chain. CCW order starting at the lowest-x (then lowest-y)
/// point; collinear points are dropped.
Polygon2 convex_hull(Polygon2 points);

/// Hull of {+v_i, -v_i} for the rows of `vectors` (L x 2), or of {0, v_i} when
/// `one_sided`. Vectors shorter than `mag_eps` are ignored.
Polygon2 build_hull(const Eigen::MatrixXd& vectors, bool one_sided = false,
                    double mag_eps = 1e-12);

/// Closed uniform cubic B-spline with the hull as periodic control polygon,
/// `samples_per_segment` samples per control interval plus the closing point.
Polygon2 build_outline(const Polygon2& hull, int samples_per_segment = 16);

double polygon_area(const Polygon2& polygon);

/// Diameter over minimum width of a convex closed polyline (>= 1).
double outline_aspect(const Polygon2& outline);

bool point_in_convex_polygon(const Polygon2& polygon, const Point2& p, double tol);

Glyph build_glyph(int anchor, int row_id, const Point2& center, const Eigen::MatrixXd& vectors,
                  const GlyphOptions& options);

/// draw_rank 0 is drawn first (bottom): decreasing area, ties by row id.
void rank_glyphs(std::vector<Glyph>& glyphs);

/// Factor that makes the median glyph radius (longest vector) equal to 1% of
/// `diameter`, times `user_scale`.
double glyph_scale_factor(const std::vector<Eigen::MatrixXd>& vectors, double diameter,
                          double user_scale);

}  // namespace subspace_lens
