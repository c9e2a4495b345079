#pragma once

#include "subspace_lens/mds.hpp"
#include "subspace_lens/synthetic.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace subspace_lens {

/// Statistics over pairs of transformed basis vectors (first two rows).
struct BasisPairStats {
  std::string method;
  int points = 0;
  double mean_len1 = 0.0;
  double mean_len2 = 0.0;
  double mean_angle = 0.0;  // degrees
  double angle_std = 0.0;   // population std, degrees
};

/// `vectors` holds one L x 2 matrix (L >= 2) per point.
BasisPairStats basis_pair_stats(const std::string& method,
                                const std::vector<Eigen::MatrixXd>& vectors);

struct PlanarVerificationConfig {
  PlanarGridParams grid;
  int k = 8;
  int dims = 2;
  SmacofConfig smacof;
  bool include_finite_difference = true;
};

struct PlanarVerification {
  Embedding embedding;
  std::vector<int> interior;  // row positions
  std::vector<BasisPairStats> rows;
  /// Weighted transformed vectors of the interior points, per row of `rows`.
  std::vector<std::vector<Eigen::MatrixXd>> vectors;
  double seconds = 0.0;
};

/// Planar grid -> MDS -> local PCA -> transform, statistics over interior points.
PlanarVerification run_planar_verification(const PlanarVerificationConfig& config);

std::string format_planar_table(const PlanarVerification& result);

}  // namespace subspace_lens
