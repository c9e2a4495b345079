#pragma once

#include "subspace_lens/ingest.hpp"

#include <Eigen/Dense>

#include <vector>

namespace subspace_lens {

struct QualityReport {
  std::vector<double> per_point_stress;
  double trustworthiness = 1.0;
  std::vector<double> per_point_trust;
  std::vector<double> linearity;
  int k_used = 0;
};

/// Point i's share 1/2 sum_{j != i} (|x_i - x_j| - |y_i - y_j|)^2; the shares
/// sum to the total stress.
std::vector<double> per_point_stress(const DataMatrix& data, const Eigen::MatrixXd& coords);

struct Trustworthiness {
  double global = 1.0;
  std::vector<double> per_point;  // 1 - penalty_i / max_penalty
};

/// T(k) = 1 - 2 / (N k (2N - 3k - 1)) sum_i sum_{j in U_k(i)} (r(i, j) - k),
/// with distance ties ranked by ascending row id. Requires k < N / 2.
Trustworthiness trustworthiness(const DataMatrix& data, const Eigen::MatrixXd& coords, int k);

}  // namespace subspace_lens
