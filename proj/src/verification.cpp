#include "subspace_lens/verification.hpp"

#include "subspace_lens/error.hpp"
#include "subspace_lens/implicit_xform.hpp"
#include "subspace_lens/local_subspace.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace subspace_lens {

BasisPairStats basis_pair_stats(const std::string& method,
                                const std::vector<Eigen::MatrixXd>& vectors) {
  BasisPairStats s;
  s.method = method;
  s.points = static_cast<int>(vectors.size());
  if (vectors.empty()) return s;
  std::vector<double> angles;
  for (const auto& v : vectors) {
    if (v.rows() < 2 || v.cols() != 2) throw ValidationError("need at least two 2D vectors");
    const Eigen::Vector2d a = v.row(0).transpose();
    const Eigen::Vector2d b = v.row(1).transpose();
    s.mean_len1 += a.norm();
    s.mean_len2 += b.norm();
    const double cross = a.x() * b.y() - a.y() * b.x();
    angles.push_back(std::atan2(std::abs(cross), a.dot(b)) * 180.0 / std::numbers::pi);
  }
  const double n = static_cast<double>(vectors.size());
  s.mean_len1 /= n;
  s.mean_len2 /= n;
  for (double a : angles) s.mean_angle += a;
  s.mean_angle /= n;
  for (double a : angles) s.angle_std += (a - s.mean_angle) * (a - s.mean_angle);
  s.angle_std = std::sqrt(s.angle_std / n);
  return s;
}

PlanarVerification run_planar_verification(const PlanarVerificationConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  PlanarVerification out;
  const DataMatrix data = planar_grid(config.grid);
  for (int i = 0; i < data.rows(); ++i) {
    if (planar_grid_interior(config.grid, data.row_ids[i])) out.interior.push_back(i);
  }
  if (out.interior.empty()) throw ValidationError("grid has no interior points");

  out.embedding = run_smacof(data, config.smacof);
  SubspaceSelection selection;
  selection.fixed_dims = config.dims;

  std::vector<LocalSubspace> subspaces;
  for (int i : out.interior) subspaces.push_back(local_pca(data, i, knn(data, i, config.k), selection));

  auto collect = [&](const std::string& name, auto&& jacobian_of) {
    std::vector<Eigen::MatrixXd> vs;
    for (std::size_t p = 0; p < out.interior.size(); ++p) {
      vs.push_back(transform_subspace(jacobian_of(out.interior[p]), subspaces[p]).vectors);
    }
    out.rows.push_back(basis_pair_stats(name, vs));
    out.vectors.push_back(std::move(vs));
  };

  const MdsImplicitTransform pointwise(data, out.embedding, {XformMode::kPointwise});
  collect("implicit (pointwise)", [&](int i) { return pointwise.jacobian(i); });
  const MdsImplicitTransform coupled(data, out.embedding, {XformMode::kCoupled});
  collect("implicit (coupled)", [&](int i) { return coupled.jacobian(i); });
  if (config.include_finite_difference) {
    collect("finite difference", [&](int i) {
      return finite_difference_jacobian(data, out.embedding, i);
    });
  }
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string format_planar_table(const PlanarVerification& result) {
  std::string text;
  char line[256];
  std::snprintf(line, sizeof line, "%-22s %12s %12s %14s %14s\n", "", "mean len1", "mean len2",
                "mean angle", "std of angles");
  text += line;
  for (const auto& r : result.rows) {
    std::snprintf(line, sizeof line, "%-22s %12.8f %12.8f %14.8f %14.8f\n", r.method.c_str(),
                  r.mean_len1, r.mean_len2, r.mean_angle, r.angle_std);
    text += line;
  }
  return text;
}

}  // namespace subspace_lens
