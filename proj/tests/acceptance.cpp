// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "oracles/oracles.hpp"
#include "subspace_lens/glyph.hpp"
#include "subspace_lens/implicit_xform.hpp"
#include "subspace_lens/mds.hpp"
#include "subspace_lens/pca.hpp"
#include "subspace_lens/pipeline.hpp"
#include "subspace_lens/quality.hpp"
#include "subspace_lens/synthetic.hpp"
#include "subspace_lens/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

using namespace subspace_lens;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  %-28s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void run(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    auto [pass, detail] = body();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char t[64];
    std::snprintf(t, sizeof t, " [%.2fs]", secs);
    report(name, pass, detail + t);
  } catch (const std::exception& e) {
    report(name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double relative(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

Polygon2 sorted(Polygon2 p) {
  std::sort(p.begin(), p.end(), [](const Point2& a, const Point2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  return p;
}

std::pair<bool, std::string> planar_grid_check() {
  PlanarVerificationConfig c;
  c.grid = {15, 15, 0.1};
  c.k = 8;
  c.dims = 2;
  c.include_finite_difference = false;
  const PlanarVerification v = run_planar_verification(c);
  const BasisPairStats& s = v.rows.at(0);  // pointwise implicit
  const double len_diff = std::abs(s.mean_len1 - s.mean_len2) / std::max(s.mean_len1, s.mean_len2);
  const bool pass = s.mean_angle >= 89.5 && s.mean_angle <= 90.5 && s.angle_std <= 0.05 &&
                    len_diff <= 1e-3 && v.seconds <= 120.0;
  std::string detail = fmt("mean angle %.6f, std %.2e deg, len diff %.2e, %.1fs", s.mean_angle,
                           s.angle_std, len_diff, v.seconds);
  const BasisPairStats& cpl = v.rows.at(1);
  detail += fmt(" | coupled mode: angle %.4f std %.4f len %.6f/%.6f", cpl.mean_angle,
                cpl.angle_std, cpl.mean_len1, cpl.mean_len2);
  return {pass, detail};
}

std::pair<bool, std::string> fd_equivalence() {
  std::mt19937_64 rng(2024);
  const DataMatrix data = make_data(oracle::gaussian(20, 5, rng));
  SmacofConfig sc;
  sc.seed = 7;
  const Embedding e = run_smacof(data, sc);
  if (!e.converged) return {false, "MDS did not converge"};
  const MdsImplicitTransform xf(data, e);
  int ok = 0;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double err =
        relative(xf.jacobian(i).matrix, finite_difference_jacobian(data, e, i).matrix);
    worst = std::max(worst, err);
    ok += err <= 2e-3 ? 1 : 0;
  }
  return {ok >= 19, fmt("%.0f/20 points within 2e-3, worst %.2e", ok, worst)};
}

std::pair<bool, std::string> derivatives() {
  std::mt19937_64 rng(77);
  double worst_g = 0.0;
  double worst_yy = 0.0;
  double worst_yx = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int n = 5 + t % 4;
    const int dims = 3 + t % 3;
    const Eigen::MatrixXd x = oracle::gaussian(n, dims, rng);
    const Eigen::MatrixXd y = oracle::gaussian(n, 2, rng);
    const DataMatrix data = make_data(x);
    worst_g = std::max(worst_g, relative(stress_gradient(data, y),
                                         oracle::stress_gradient_fd(x, y, 1e-5)));
    const Eigen::MatrixXd fyy = oracle::jacobian_fd(
        [&](const Eigen::MatrixXd& yy) { return stress_gradient(data, yy); }, y, 1e-5);
    const Eigen::MatrixXd fyx = oracle::jacobian_fd(
        [&](const Eigen::MatrixXd& xx) { return stress_gradient(make_data(xx), y); }, x, 1e-5);
    Eigen::MatrixXd hyy(n * 2, n * 2);
    Eigen::MatrixXd hyx(n * 2, n * dims);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        hyy.block(i * 2, j * 2, 2, 2) = mds_hessian_yy(data, y, i, j);
        hyx.block(i * 2, j * dims, 2, dims) = mds_hessian_yx(data, y, i, j);
      }
    }
    worst_yy = std::max(worst_yy, relative(hyy, fyy));
    worst_yx = std::max(worst_yx, relative(hyx, fyx));
  }
  const bool pass = worst_g <= 1e-5 && worst_yy <= 1e-5 && worst_yx <= 1e-5;
  return {pass, fmt("worst relative error: gradient %.2e, H_yy %.2e, H_yx %.2e", worst_g,
                    worst_yy, worst_yx)};
}

std::pair<bool, std::string> smacof_soundness() {
  std::mt19937_64 rng(99);
  int monotone = 0;
  int realizable = 0;
  int realized = 0;
  double worst_ratio = 0.0;
  std::string missed;
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + t % 23;
    const int dims = t % 4 == 0 ? 2 : 2 + t % 7;
    DataMatrix data = make_data(oracle::gaussian(n, dims, rng));
    if (t % 10 == 0) {
      Eigen::MatrixXd tri(3, 2);
      tri << 0, 0, 3, 0, 0, 4;
      data = make_data(tri * (1.0 + t / 10));
    }
    SmacofConfig c;
    c.seed = static_cast<std::uint64_t>(t);
    // A PCA start on 2D data is already an exact solution, so realizable
    // instances start from random coordinates.
    c.init = t % 3 == 0 && data.dims() > 2 ? SmacofInit::kPca : SmacofInit::kRandom;
    const Embedding e = run_smacof(data, c);
    bool mono = true;
    for (std::size_t i = 1; i < e.stress_history.size(); ++i) {
      mono = mono && e.stress_history[i] <= e.stress_history[i - 1];
    }
    monotone += mono ? 1 : 0;
    if (data.dims() == 2) {
      ++realizable;
      const double ratio = e.stress_total / e.stress_history.front();
      worst_ratio = std::max(worst_ratio, ratio);
      realized += ratio <= 1e-8 ? 1 : 0;
      // Converged to a stationary point that is not the global minimum.
      if (ratio > 1e-8) missed += fmt(" case %.0f (n=%.0f, |g|=%.1e)", t, n, e.gradient_norm);
    }
  }
  return {monotone == 100 && realized == realizable,
          fmt("%.0f/100 monotone; %.0f/%.0f realizable reach 1e-8 (worst ratio %.2e)", monotone,
              realized, realizable, worst_ratio) +
              (missed.empty() ? "" : ";" + missed)};
}

std::pair<bool, std::string> pca_consistency() {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const DataMatrix data = make_data(oracle::gaussian(15 + 3 * t, 3 + t % 6, rng));
    const LinearMap map = fit_pca(data);
    const QuadraticProjectionObjective q(map);
    for (int i = 0; i < data.rows(); ++i) {
      worst = std::max(worst, (q.implicit_jacobian(i).matrix - map.matrix).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-10, fmt("max |J - M| over 10 datasets: %.2e", worst)};
}

std::pair<bool, std::string> two_planes_check() {
  PipelineConfig c;
  c.data = two_planes();
  c.method = ProjectionMethod::kPca;
  const PipelineResult r = run_pipeline(c);
  std::vector<double> a[2];
  for (int i = 0; i < r.data.rows(); ++i) a[r.data.labels[i]].push_back(r.glyphs[i].aspect);
  const double m0 = median(a[0]);
  const double m1 = median(a[1]);
  return {m1 >= 2.0 * m0, fmt("median aspect: face-on plane %.3f, foreshortened plane %.3f (ratio %.2f)",
                              m0, m1, m1 / m0)};
}

std::pair<bool, std::string> trust_check() {
  std::mt19937_64 rng(31);
  bool identity = true;
  for (int t = 0; t < 10; ++t) {
    const Eigen::MatrixXd x = oracle::gaussian(20, 2, rng);
    Eigen::Matrix2d rot;
    rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    const Eigen::MatrixXd y = (x * rot).rowwise() + Eigen::RowVector2d(t, -t);
    identity = identity && trustworthiness(make_data(x), y, 1 + t % 9).global == 1.0;
  }
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const Eigen::MatrixXd x = oracle::gaussian(10, 4, rng);
    const Eigen::MatrixXd y = oracle::gaussian(10, 2, rng);
    const int k = 1 + t % 4;
    const Trustworthiness got = trustworthiness(make_data(x), y, k);
    const oracle::Trust ref = oracle::trustworthiness(x, y, k);
    worst = std::max(worst, std::abs(got.global - ref.global));
    for (int i = 0; i < 10; ++i) worst = std::max(worst, std::abs(got.per_point[i] - ref.per_point[i]));
  }
  PipelineConfig c;
  c.input_path = SUBSPACE_LENS_DATA_DIR "/iris.csv";
  c.csv.label_column = "species";
  c.dedup_eps = 0.0;
  c.selection.fixed_dims = 4;
  const PipelineResult r = run_pipeline(c);
  int degenerate = 0;
  for (const auto& g : r.scene.glyphs) {
    degenerate += std::count(g.flags.begin(), g.flags.end(), "degenerate") ? 1 : 0;
  }
  const bool metrics = r.scene.metrics.enabled && r.scene.metrics.per_point_stress.size() == 147 &&
                       r.scene.metrics.per_point_trust.size() == 147;
  const bool pass = identity && worst <= 1e-12 && degenerate == 0 && metrics &&
                    r.data.rows() == 147;
  std::string detail = std::string("identity T=1: ") + (identity ? "yes" : "no");
  detail += fmt("; oracle max diff %.1e; Iris N=%.0f, T=%.4f, degenerate flags %.0f", worst,
                r.data.rows(), r.scene.metrics.trustworthiness, degenerate);
  return {pass, detail};
}

std::pair<bool, std::string> glyph_suite() {
  std::mt19937_64 rng(1000);
  std::uniform_int_distribution<int> count(1, 7);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> scale(-3.0, 1.0);
  int contain = 0;
  int sign = 0;
  int rotation = 0;
  int hull = 0;
  int spline_cases = 0;
  for (int t = 0; t < 1000; ++t) {
    Eigen::MatrixXd v = oracle::gaussian(count(rng), 2, rng) * std::pow(10.0, scale(rng));
    const Polygon2 h = build_hull(v);
    std::vector<Eigen::Vector2d> sym;
    for (int r = 0; r < v.rows(); ++r) {
      sym.push_back(v.row(r).transpose());
      sym.push_back(-v.row(r).transpose());
    }
    hull += sorted(h) == sorted(oracle::brute_force_hull(sym)) ? 1 : 0;

    Eigen::MatrixXd flipped = v;
    for (int r = 0; r < v.rows(); ++r)
      if ((t >> r) & 1) flipped.row(r) *= -1.0;
    sign += sorted(build_hull(flipped)) == sorted(h) ? 1 : 0;

    if (h.size() < 3) {
      ++contain;
      ++rotation;
      continue;
    }
    ++spline_cases;
    const Polygon2 outline = build_outline(h, 16);
    const double tol = 1e-12 * std::max(1.0, v.norm());
    bool inside = true;
    for (const auto& p : outline) inside = inside && point_in_convex_polygon(h, p, tol);
    inside = inside && polygon_area(outline) <= polygon_area(h) + tol;
    contain += inside ? 1 : 0;

    const Eigen::Rotation2Dd rot(angle(rng));
    const Polygon2 rh = build_hull(v * rot.toRotationMatrix().transpose());
    const Polygon2 ro = build_outline(rh, 16);
    std::vector<Eigen::Vector2d> eh;
    std::vector<Eigen::Vector2d> eo;
    for (const auto& p : h) eh.push_back(rot * p);
    for (const auto& p : outline) eo.push_back(rot * p);
    const double s = std::max(1.0, v.norm());
    rotation += rh.size() == h.size() && oracle::hausdorff({rh.begin(), rh.end()}, eh) <= 1e-9 * s &&
                        oracle::hausdorff({ro.begin(), ro.end()}, eo) <= 1e-9 * s
                    ? 1
                    : 0;
  }
  const bool pass = contain == 1000 && sign == 1000 && rotation == 1000 && hull == 1000;
  return {pass, fmt("containment %.0f, sign-flip %.0f, rotation %.0f, hull %.0f of 1000", contain,
                    sign, rotation, hull) +
                    " (" + std::to_string(spline_cases) + " spline cases)"};
}

std::pair<bool, std::string> determinism() {
  PipelineConfig c;
  c.input_path = SUBSPACE_LENS_DATA_DIR "/iris.csv";
  c.csv.label_column = "species";
  c.smacof.seed = 12345;
  const std::string a = serialize_scene(run_pipeline(c).scene);
  const std::string b = serialize_scene(run_pipeline(c).scene);
  return {a == b, "two runs, " + std::to_string(a.size()) + " bytes, " +
                      (a == b ? "identical" : "different")};
}

}  // namespace

int main() {
  run("planar-grid verification", planar_grid_check);
  run("fd-oracle equivalence", fd_equivalence);
  run("derivative correctness", derivatives);
  run("smacof soundness", smacof_soundness);
  run("pca consistency", pca_consistency);
  run("two-planes aspect", two_planes_check);
  run("trustworthiness", trust_check);
  run("glyph geometry", glyph_suite);
  run("determinism", determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
