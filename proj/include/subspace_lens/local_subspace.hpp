#pragma once

#include "subspace_lens/ingest.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace subspace_lens {

inline constexpr double kLinearityCap = 1e6;

/// How many local principal axes to keep.
struct SubspaceSelection {
  /// Fixed count, capped at min(k, D). Ignored when `variance_threshold` is set.
  int fixed_dims = 5;
  /// Smallest L whose cumulative eigenvalue share reaches this fraction.
  std::optional<double> variance_threshold;
};

struct LocalSubspace {
  int anchor = 0;                 // row position in the DataMatrix
  int anchor_row_id = 0;
  std::vector<int> neighbors;     // row positions, nearest first
  Eigen::MatrixXd basis;          // L x D, orthonormal rows
  Eigen::VectorXd eigenvalues;    // L, nonincreasing
  Eigen::VectorXd spectrum;       // full local spectrum (min(D, k+1) entries)
  Eigen::VectorXd weights;        // L, lambda_i / sum_{j<=L} lambda_j
  double linearity = 1.0;         // lambda_1 / lambda_2, clamped
  bool linearity_capped = false;

  int dims() const { return static_cast<int>(basis.rows()); }
};

/// k nearest rows to `anchor` (a row position), excluding the anchor itself.
/// Ties in distance go to the lower row id.
std::vector<int> knn(const DataMatrix& data, int anchor, int k);

/// PCA of the anchor and its neighbors, centered on their mean, covariance
/// normalized by 1/(k+1).
LocalSubspace local_pca(const DataMatrix& data, int anchor, const std::vector<int>& neighbors,
                        const SubspaceSelection& selection);

/// knn + local_pca for every row.
std::vector<LocalSubspace> extract_subspaces(const DataMatrix& data, int k,
                                             const SubspaceSelection& selection);

}  // namespace subspace_lens
