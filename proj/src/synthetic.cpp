#include "subspace_lens/synthetic.hpp"

#include "subspace_lens/error.hpp"

#include <Eigen/Geometry>

namespace subspace_lens {

SyntheticKind parse_synthetic_kind(const std::string& name) {
  if (name == "planar-grid" || name == "planar_grid") return SyntheticKind::kPlanarGrid;
  if (name == "two-planes" || name == "two_planes") return SyntheticKind::kTwoPlanes;
  throw ValidationError("unknown synthetic kind '" + name + "'");
}

std::string to_string(SyntheticKind kind) {
  return kind == SyntheticKind::kPlanarGrid ? "planar-grid" : "two-planes";
}

DataMatrix planar_grid(const PlanarGridParams& params) {
  if (params.rows < 1 || params.cols < 1 || !(params.spacing > 0.0)) {
    throw ValidationError("planar grid parameters must be positive");
  }
  const Eigen::Matrix3d rotation =
      (Eigen::AngleAxisd(0.7, Eigen::Vector3d::UnitZ()) *
       Eigen::AngleAxisd(0.5, Eigen::Vector3d::UnitY()) *
       Eigen::AngleAxisd(0.3, Eigen::Vector3d::UnitX()))
          .toRotationMatrix();
  const double cr = 0.5 * (params.rows - 1);
  const double cc = 0.5 * (params.cols - 1);
  Eigen::MatrixXd values(params.rows * params.cols, 3);
  for (int r = 0; r < params.rows; ++r) {
    for (int c = 0; c < params.cols; ++c) {
      const Eigen::Vector3d p((c - cc) * params.spacing, (r - cr) * params.spacing, 0.0);
      values.row(r * params.cols + c) = (rotation * p).transpose();
    }
  }
  DataMatrix data = make_data(std::move(values));
  data.column_names = {"x", "y", "z"};
  return data;
}

bool planar_grid_interior(const PlanarGridParams& params, int row_id) {
  const int r = row_id / params.cols;
  const int c = row_id % params.cols;
  return r > 0 && r < params.rows - 1 && c > 0 && c < params.cols - 1;
}

DataMatrix two_planes(const TwoPlanesParams& params) {
  if (params.a_along_x < 1 || params.a_along_y < 1 || params.b_along_x < 1 ||
      params.b_along_z < 1 || !(params.spacing > 0.0)) {
    throw ValidationError("two-planes parameters must be positive");
  }
  const double s = params.spacing;
  const int na = params.a_along_x * params.a_along_y;
  const int nb = params.b_along_x * params.b_along_z;
  Eigen::MatrixXd values(na + nb, 3);
  std::vector<int> labels;
  int row = 0;
  const double ax = 0.5 * (params.a_along_x - 1);
  for (int i = 0; i < params.a_along_x; ++i) {
    for (int j = 0; j < params.a_along_y; ++j) {
      values.row(row++) << (i - ax) * s, j * s, 0.0;
      labels.push_back(0);
    }
  }
  // Plane B starts one step off the shared axis so no point is duplicated.
  const double bx = 0.5 * (params.b_along_x - 1);
  for (int i = 0; i < params.b_along_x; ++i) {
    for (int j = 0; j < params.b_along_z; ++j) {
      values.row(row++) << (i - bx) * s, 0.0, (j + 1) * s;
      labels.push_back(1);
    }
  }
  DataMatrix data = make_data(std::move(values), std::move(labels));
  data.column_names = {"x", "y", "z"};
  data.class_names = {"plane_a", "plane_b"};
  return data;
}

}  // namespace subspace_lens
