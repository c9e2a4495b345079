#include "subspace_lens/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace subspace_lens {

void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      arg = i;
    }
  }
  if (v[arg] < 0.0) v = -v;
}

namespace {

// Canonical orthonormal basis for span(U) built from projected coordinate axes.
Eigen::MatrixXd canonical_basis(const Eigen::MatrixXd& U) {
  const Eigen::Index dim = U.rows();
  const Eigen::Index m = U.cols();
  Eigen::MatrixXd basis(dim, m);
  Eigen::Index filled = 0;
  std::vector<bool> used(static_cast<std::size_t>(dim), false);
  while (filled < m) {
    // Pick the axis whose residual (after removing the current basis) inside
    // span(U) is longest; lowest index on ties.
    Eigen::Index best_axis = -1;
    double best_norm = 0.0;
    Eigen::VectorXd best_vec;
    for (Eigen::Index a = 0; a < dim; ++a) {
      if (used[static_cast<std::size_t>(a)]) continue;
      Eigen::VectorXd p = U * U.row(a).transpose();
      for (Eigen::Index b = 0; b < filled; ++b) p -= basis.col(b).dot(p) * basis.col(b);
      const double norm = p.norm();
      if (norm > best_norm * (1.0 + 1e-12)) {
        best_norm = norm;
        best_axis = a;
        best_vec = p;
      }
    }
    if (best_axis < 0 || best_norm < 1e-8) return U;
    used[static_cast<std::size_t>(best_axis)] = true;
    basis.col(filled++) = best_vec / best_norm;
  }
  return basis;
}

}  // namespace

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& symmetric, double degeneracy_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  const Eigen::Index n = symmetric.rows();
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = solver.eigenvalues()[n - 1 - i];
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  if (n == 0) return out;

  const double scale = std::max(std::abs(out.values[0]), std::abs(out.values[n - 1]));
  const double tol = degeneracy_tol * scale;
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && std::abs(out.values[end - 1] - out.values[end]) <= tol) ++end;
    if (end - start > 1 && scale > 0.0) {
      out.vectors.middleCols(start, end - start) =
          canonical_basis(out.vectors.middleCols(start, end - start));
    }
    start = end;
  }
  for (Eigen::Index i = 0; i < n; ++i) canonicalize_sign(out.vectors.col(i));
  return out;
}

}  // namespace subspace_lens
