#include "subspace_lens/quality.hpp"

#include "subspace_lens/error.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace subspace_lens {

std::vector<double> per_point_stress(const DataMatrix& data, const Eigen::MatrixXd& coords) {
  if (coords.rows() != data.values.rows()) {
    throw ValidationError("per_point_stress: coordinate rows do not match data rows");
  }
  const Eigen::Index n = coords.rows();
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = (data.values.row(i) - data.values.row(j)).norm() -
                       (coords.row(i) - coords.row(j)).norm();
      const double half = 0.5 * r * r;
      out[static_cast<std::size_t>(i)] += half;
      out[static_cast<std::size_t>(j)] += half;
    }
  }
  return out;
}

namespace {

// Other points ordered by distance from `i`, ties by row id.
std::vector<int> neighbor_order(const Eigen::MatrixXd& points, const std::vector<int>& row_ids,
                                int i) {
  const int n = static_cast<int>(points.rows());
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) dist[j] = (points.row(j) - points.row(i)).squaredNorm();
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n - 1));
  for (int j = 0; j < n; ++j) {
    if (j != i) order.push_back(j);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (dist[a] != dist[b]) return dist[a] < dist[b];
    return row_ids[a] < row_ids[b];
  });
  return order;
}

}  // namespace

Trustworthiness trustworthiness(const DataMatrix& data, const Eigen::MatrixXd& coords, int k) {
  const int n = data.rows();
  if (coords.rows() != n) {
    throw ValidationError("trustworthiness: coordinate rows do not match data rows");
  }
  if (k < 1 || 2 * k >= n) {
    throw ValidationError("trustworthiness needs 1 <= k < N/2 (k=" + std::to_string(k) +
                          ", N=" + std::to_string(n) + ")");
  }
  const double max_penalty = 0.5 * k * (2.0 * n - 3.0 * k - 1.0);
  Trustworthiness out;
  out.per_point.resize(static_cast<std::size_t>(n));
  double total = 0.0;
  std::vector<int> rank(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::vector<int> original = neighbor_order(data.values, data.row_ids, i);
    for (int r = 0; r < n - 1; ++r) rank[original[r]] = r + 1;
    const std::vector<int> embedded = neighbor_order(coords, data.row_ids, i);
    double penalty = 0.0;
    for (int m = 0; m < k; ++m) {
      const int j = embedded[m];
      if (rank[j] > k) penalty += rank[j] - k;
    }
    total += penalty;
    out.per_point[i] = 1.0 - penalty / max_penalty;
  }
  out.global = 1.0 - total / (n * max_penalty);
  return out;
}

}  // namespace subspace_lens
