#include "subspace_lens/local_subspace.hpp"

#include "subspace_lens/error.hpp"
#include "subspace_lens/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace subspace_lens {

std::vector<int> knn(const DataMatrix& data, int anchor, int k) {
  const int n = data.rows();
  if (anchor < 0 || anchor >= n) {
    throw ValidationError("knn: anchor " + std::to_string(anchor) + " out of range");
  }
  if (k < 2 || k > n - 1) {
    throw ValidationError("knn: k=" + std::to_string(k) + " must lie in [2, " +
                          std::to_string(n - 1) + "]");
  }
  std::vector<std::pair<double, int>> candidates;
  candidates.reserve(static_cast<std::size_t>(n - 1));
  for (int j = 0; j < n; ++j) {
    if (j == anchor) continue;
    candidates.emplace_back((data.values.row(j) - data.values.row(anchor)).squaredNorm(), j);
  }
  auto closer = [&](const std::pair<double, int>& a, const std::pair<double, int>& b) {
    if (a.first != b.first) return a.first < b.first;
    return data.row_ids[a.second] < data.row_ids[b.second];
  };
  std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end(), closer);
  std::vector<int> out(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) out[i] = candidates[i].second;
  return out;
}

LocalSubspace local_pca(const DataMatrix& data, int anchor, const std::vector<int>& neighbors,
                        const SubspaceSelection& selection) {
  const int dim = data.dims();
  const int m = static_cast<int>(neighbors.size()) + 1;
  Eigen::MatrixXd hood(m, dim);
  hood.row(0) = data.values.row(anchor);
  for (int i = 1; i < m; ++i) hood.row(i) = data.values.row(neighbors[i - 1]);
  const Eigen::RowVectorXd mean = hood.colwise().mean();
  hood.rowwise() -= mean;
  const Eigen::MatrixXd cov = hood.transpose() * hood / static_cast<double>(m);

  const SymmetricEigen eig = symmetric_eigen(cov);
  const Eigen::VectorXd spectrum = eig.values.cwiseMax(0.0);
  const double total = spectrum.sum();
  if (!(total > 0.0)) {
    throw NumericalError("neighborhood of row " + std::to_string(data.row_ids[anchor]) +
                         " has zero variance");
  }

  const int k = static_cast<int>(neighbors.size());
  const int cap = std::min(k, dim);
  int L = 0;
  if (selection.variance_threshold) {
    const double tau = *selection.variance_threshold;
    if (!(tau > 0.0 && tau <= 1.0)) {
      throw ValidationError("variance threshold must lie in (0, 1]");
    }
    double cumulative = 0.0;
    for (int i = 0; i < cap; ++i) {
      cumulative += spectrum[i];
      L = i + 1;
      if (cumulative >= tau * total * (1.0 - 1e-12)) break;
    }
  } else {
    if (selection.fixed_dims < 1) throw ValidationError("subspace dimension must be >= 1");
    L = std::min(selection.fixed_dims, cap);
  }

  LocalSubspace out;
  out.anchor = anchor;
  out.anchor_row_id = data.row_ids[anchor];
  out.neighbors = neighbors;
  out.spectrum = spectrum.head(std::min(dim, m));
  out.eigenvalues = spectrum.head(L);
  out.basis = eig.vectors.leftCols(L).transpose();
  const double kept = out.eigenvalues.sum();
  out.weights = out.eigenvalues / kept;

  const double second = dim >= 2 ? spectrum[1] : 0.0;
  if (second <= 0.0 || spectrum[0] >= kLinearityCap * second) {
    out.linearity = kLinearityCap;
    out.linearity_capped = true;
  } else {
    out.linearity = spectrum[0] / second;
  }
  return out;
}

std::vector<LocalSubspace> extract_subspaces(const DataMatrix& data, int k,
                                             const SubspaceSelection& selection) {
  std::vector<LocalSubspace> out;
  out.reserve(static_cast<std::size_t>(data.rows()));
  for (int i = 0; i < data.rows(); ++i) {
    out.push_back(local_pca(data, i, knn(data, i, k), selection));
  }
  return out;
}

}  // namespace subspace_lens
