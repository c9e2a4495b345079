#include "subspace_lens/pca.hpp"

#include "subspace_lens/error.hpp"
#include "subspace_lens/linalg.hpp"

#include <cmath>
#include <string>

namespace subspace_lens {

LinearMap fit_pca(const DataMatrix& data, int output_dims) {
  const Eigen::Index n = data.values.rows();
  const Eigen::Index dim = data.values.cols();
  if (output_dims < 1 || n <= output_dims || dim < output_dims) {
    throw ValidationError("PCA needs N > d and D >= d (N=" + std::to_string(n) +
                          ", D=" + std::to_string(dim) + ", d=" + std::to_string(output_dims) +
                          ")");
  }

  LinearMap map;
  map.mean = data.values.colwise().mean().transpose();
  const Eigen::MatrixXd centered = data.values.rowwise() - map.mean.transpose();

  Eigen::VectorXd spectrum;
  Eigen::MatrixXd axes(dim, output_dims);
  if (dim <= n) {
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
    const SymmetricEigen eig = symmetric_eigen(cov);
    spectrum = eig.values;
    axes = eig.vectors.leftCols(output_dims);
  } else {
    const Eigen::MatrixXd gram = centered * centered.transpose() / static_cast<double>(n);
    const SymmetricEigen eig = symmetric_eigen(gram);
    spectrum = eig.values;
    for (int c = 0; c < output_dims; ++c) {
      if (spectrum[c] <= 0.0) break;
      Eigen::VectorXd v = centered.transpose() * eig.vectors.col(c);
      v.normalize();
      canonicalize_sign(v);
      axes.col(c) = v;
    }
  }

  const double top = spectrum.size() > 0 ? std::max(spectrum[0], 0.0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
    if (spectrum[i] > 1e-12 * top && spectrum[i] > 0.0) ++rank;
  }
  if (rank < output_dims) {
    throw NumericalError("covariance is rank deficient: effective rank " + std::to_string(rank) +
                         " < " + std::to_string(output_dims) + " output dimensions");
  }

  map.matrix = axes.transpose();
  map.eigenvalues = spectrum.head(output_dims);
  return map;
}

Eigen::MatrixXd project_points(const LinearMap& map, const Eigen::MatrixXd& points) {
  if (points.cols() != map.input_dims()) {
    throw ValidationError("projection expects " + std::to_string(map.input_dims()) +
                          "-dimensional points, got " + std::to_string(points.cols()));
  }
  return (points.rowwise() - map.mean.transpose()) * map.matrix.transpose();
}

Eigen::MatrixXd transform_vectors_linear(const LinearMap& map, const Eigen::MatrixXd& vectors) {
  if (vectors.cols() != map.input_dims()) {
    throw ValidationError("vector transform expects " + std::to_string(map.input_dims()) +
                          "-dimensional vectors, got " + std::to_string(vectors.cols()));
  }
  return vectors * map.matrix.transpose();
}

}  // namespace subspace_lens
