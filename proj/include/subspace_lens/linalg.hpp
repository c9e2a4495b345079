#pragma once

#include <Eigen/Dense>

namespace subspace_lens {

/// Eigenpairs of a symmetric matrix, largest eigenvalue first.
struct SymmetricEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns, matching `values`
};

/// Deterministic symmetric eigendecomposition.
///
/// Eigenvalues are sorted in descending order. Within a cluster of eigenvalues
/// that agree to `degeneracy_tol * |lambda_max|` the eigenbasis is arbitrary, so
/// it is replaced by a canonical one: coordinate axes are projected into the
/// cluster's subspace in order of decreasing projected length and
/// Gram-Schmidt orthonormalized. Finally every eigenvector is flipped so that
/// its largest-magnitude entry is positive (first such entry on ties).
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& symmetric, double degeneracy_tol = 1e-9);

/// Flips `v` so that its largest-magnitude entry is positive.
void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v);

}  // namespace subspace_lens
