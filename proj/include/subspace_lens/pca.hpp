#pragma once

#include "subspace_lens/ingest.hpp"

#include <Eigen/Dense>

namespace subspace_lens {

/// Linear projection p = M (P - mean). Rows of M are the top-d principal axes.
struct LinearMap {
  Eigen::MatrixXd matrix;       // d x D, orthonormal rows
  Eigen::VectorXd mean;         // D
  Eigen::VectorXd eigenvalues;  // d, nonincreasing, population covariance

  int output_dims() const { return static_cast<int>(matrix.rows()); }
  int input_dims() const { return static_cast<int>(matrix.cols()); }
};

/// Principal component analysis of the mean-centered data. Uses the D x D
/// covariance when D <= N and the N x N Gram matrix otherwise.
LinearMap fit_pca(const DataMatrix& data, int output_dims = 2);

/// Row i of the result is M (P_i - mean).
Eigen::MatrixXd project_points(const LinearMap& map, const Eigen::MatrixXd& points);

/// Each row V (length D) maps to M V; centering does not apply to vectors.
Eigen::MatrixXd transform_vectors_linear(const LinearMap& map, const Eigen::MatrixXd& vectors);

}  // namespace subspace_lens
