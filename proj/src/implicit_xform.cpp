#include "subspace_lens/implicit_xform.hpp"

#include "subspace_lens/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace subspace_lens {

std::string to_string(XformMethod method) {
  switch (method) {
    case XformMethod::kImplicit: return "implicit";
    case XformMethod::kFiniteDifference: return "fd";
    case XformMethod::kLinear: return "linear";
  }
  return "implicit";
}

std::string to_string(XformMode mode) {
  return mode == XformMode::kCoupled ? "coupled" : "pointwise";
}

XformMethod parse_xform_method(const std::string& name) {
  if (name == "implicit") return XformMethod::kImplicit;
  if (name == "fd") return XformMethod::kFiniteDifference;
  if (name == "linear") return XformMethod::kLinear;
  throw ValidationError("unknown transform method '" + name + "'");
}

XformMode parse_xform_mode(const std::string& name) {
  if (name == "pointwise") return XformMode::kPointwise;
  if (name == "coupled") return XformMode::kCoupled;
  throw ValidationError("unknown transform mode '" + name + "'");
}

namespace {

void check_pair_separated(const Eigen::RowVectorXd& dy, int i, int k) {
  if (!(dy.norm() > 0.0)) {
    throw NumericalError("embedded points " + std::to_string(i) + " and " + std::to_string(k) +
                         " coincide");
  }
}

Eigen::MatrixXd hessian_yy(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int i, int j) {
  const Eigen::Index d = y.cols();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  if (i == j) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index k = 0; k < y.rows(); ++k) {
      if (k == i) continue;
      const Eigen::VectorXd dy = (y.row(i) - y.row(k)).transpose();
      check_pair_separated(dy.transpose(), i, static_cast<int>(k));
      const double dist_y = dy.norm();
      const double dist_x = (x.row(i) - x.row(k)).norm();
      h += (1.0 - dist_x / dist_y) * eye +
           (dist_x / (dist_y * dist_y * dist_y)) * (dy * dy.transpose());
    }
    return 2.0 * h;
  }
  const Eigen::VectorXd dy = (y.row(i) - y.row(j)).transpose();
  check_pair_separated(dy.transpose(), i, j);
  const double dist_y = dy.norm();
  const double dist_x = (x.row(i) - x.row(j)).norm();
  return 2.0 * (dist_x / dist_y - 1.0) * eye -
         (2.0 * dist_x / (dist_y * dist_y * dist_y)) * (dy * dy.transpose());
}

Eigen::MatrixXd hessian_yx(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int i, int j) {
  auto outer = [&](int a, int b) -> Eigen::MatrixXd {
    const Eigen::VectorXd dy = (y.row(a) - y.row(b)).transpose();
    check_pair_separated(dy.transpose(), a, b);
    const Eigen::VectorXd dx = (x.row(a) - x.row(b)).transpose();
    return (dy / dy.norm()) * (dx / dx.norm()).transpose();
  };
  if (i == j) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(y.cols(), x.cols());
    for (Eigen::Index k = 0; k < y.rows(); ++k) {
      if (k == i) continue;
      b -= 2.0 * outer(i, static_cast<int>(k));
    }
    return b;
  }
  return 2.0 * outer(i, j);
}

void check_indices(const DataMatrix& data, const Eigen::MatrixXd& coords, int i, int j) {
  if (coords.rows() != data.values.rows()) {
    throw ValidationError("coordinate rows do not match data rows");
  }
  if (i < 0 || j < 0 || i >= data.rows() || j >= data.rows()) {
    throw ValidationError("point index out of range");
  }
}

// Orthonormal basis of the rigid motions (translations and rotations) of a
// configuration, flattened point-major to length N * d.
Eigen::MatrixXd rigid_motion_basis(const Eigen::MatrixXd& coords) {
  const Eigen::Index n = coords.rows();
  const Eigen::Index d = coords.cols();
  const Eigen::RowVectorXd centroid = coords.colwise().mean();
  const Eigen::Index count = d + d * (d - 1) / 2;
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n * d, count);
  Eigen::Index col = 0;
  for (Eigen::Index a = 0; a < d; ++a, ++col) {
    for (Eigen::Index i = 0; i < n; ++i) z(i * d + a, col) = 1.0;
  }
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a + 1; b < d; ++b, ++col) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::RowVectorXd c = coords.row(i) - centroid;
        z(i * d + a, col) = -c[b];
        z(i * d + b, col) = c[a];
      }
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n * d, count);
}

}  // namespace

Eigen::MatrixXd mds_hessian_yy(const DataMatrix& data, const Eigen::MatrixXd& coords, int i,
                               int j) {
  check_indices(data, coords, i, j);
  return hessian_yy(data.values, coords, i, j);
}

Eigen::MatrixXd mds_hessian_yx(const DataMatrix& data, const Eigen::MatrixXd& coords, int i,
                               int j) {
  check_indices(data, coords, i, j);
  return hessian_yx(data.values, coords, i, j);
}

JacobianBlock solve_implicit(const Eigen::MatrixXd& hessian, const Eigen::MatrixXd& mixed,
                             double cond_cap) {
  JacobianBlock out;
  out.hessian_block = hessian;
  const Eigen::Index d = hessian.rows();

  Eigen::VectorXd lambda(d);
  Eigen::MatrixXd vecs(d, d);
  if (d == 2) {
    const double a = hessian(0, 0);
    const double b = 0.5 * (hessian(0, 1) + hessian(1, 0));
    const double c = hessian(1, 1);
    const double mid = 0.5 * (a + c);
    const double rad = std::hypot(0.5 * (a - c), b);
    lambda << mid + rad, mid - rad;
    const double det = a * c - b * b;
    out.hessian_cond = std::abs(lambda[1]) > 0.0 ? std::abs(lambda[0]) / std::abs(lambda[1])
                                                 : std::numeric_limits<double>::infinity();
    if (lambda[1] > 0.0 && out.hessian_cond <= cond_cap) {
      Eigen::Matrix2d inv;
      inv << c, -b, -b, a;
      out.matrix = -(inv / det) * mixed;
      return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hessian);
    lambda = es.eigenvalues();
    vecs = es.eigenvectors();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (hessian + hessian.transpose()));
    lambda = es.eigenvalues();
    vecs = es.eigenvectors();
    const double hi = lambda.cwiseAbs().maxCoeff();
    const double lo = lambda.cwiseAbs().minCoeff();
    out.hessian_cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (lambda.minCoeff() > 0.0 && out.hessian_cond <= cond_cap) {
      out.matrix = -(vecs * lambda.cwiseInverse().asDiagonal() * vecs.transpose()) * mixed;
      return out;
    }
  }

  // Pseudoinverse over the well-conditioned part of the spectrum.
  const double hi = lambda.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    if (std::abs(lambda[k]) > hi / cond_cap) inv[k] = 1.0 / lambda[k];
  }
  out.matrix = -(vecs * inv.asDiagonal() * vecs.transpose()) * mixed;
  out.degenerate = true;
  out.reason = lambda.minCoeff() <= 0.0
                   ? "Hessian block is not positive definite (min eigenvalue " +
                         std::to_string(lambda.minCoeff()) + "); pseudoinverse used"
                   : "Hessian block condition number " + std::to_string(out.hessian_cond) +
                         " exceeds cap; pseudoinverse used";
  return out;
}

double QuadraticProjectionObjective::value(const Eigen::VectorXd& point,
                                           const Eigen::VectorXd& projected) const {
  return (projected - map_.matrix * (point - map_.mean)).squaredNorm();
}

Eigen::VectorXd QuadraticProjectionObjective::gradient(const Eigen::VectorXd& point,
                                                       const Eigen::VectorXd& projected) const {
  return 2.0 * (projected - map_.matrix * (point - map_.mean));
}

Eigen::MatrixXd QuadraticProjectionObjective::hessian_yy() const {
  return 2.0 * Eigen::MatrixXd::Identity(map_.output_dims(), map_.output_dims());
}

Eigen::MatrixXd QuadraticProjectionObjective::hessian_yx() const { return -2.0 * map_.matrix; }

JacobianBlock QuadraticProjectionObjective::implicit_jacobian(int anchor) const {
  JacobianBlock out = solve_implicit(hessian_yy(), hessian_yx());
  out.anchor = anchor;
  return out;
}

MdsImplicitTransform::MdsImplicitTransform(const DataMatrix& data, const Embedding& embedding,
                                           ImplicitOptions options)
    : points_(data.values), coords_(embedding.coords), options_(options) {
  if (coords_.rows() != points_.rows()) {
    throw ValidationError("embedding does not match data");
  }
  if (!embedding.converged && !options_.force) {
    throw NumericalError(
        "embedding is not converged (gradient norm " + std::to_string(embedding.gradient_norm) +
        " > " + std::to_string(embedding.grad_tol) +
        "); the implicit transform needs a stationary point (use force to override)");
  }
  require_separated(coords_);
  if (options_.mode != XformMode::kCoupled) return;

  const Eigen::Index n = coords_.rows();
  const Eigen::Index d = coords_.cols();
  Eigen::MatrixXd full(n * d, n * d);
  for (Eigen::Index i = 0; i < n; ++i) {
    full.block(i * d, i * d, d, d) =
        hessian_yy(points_, coords_, static_cast<int>(i), static_cast<int>(i));
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Eigen::MatrixXd block =
          hessian_yy(points_, coords_, static_cast<int>(i), static_cast<int>(j));
      full.block(i * d, j * d, d, d) = block;
      full.block(j * d, i * d, d, d) = block.transpose();
    }
  }
  nullspace_ = rigid_motion_basis(coords_);
  const double shift = full.trace() / static_cast<double>(n * d);
  regularized_.compute(full + shift * nullspace_ * nullspace_.transpose());
}

Eigen::MatrixXd MdsImplicitTransform::coupled_column(int anchor) const {
  if (options_.mode != XformMode::kCoupled) {
    throw ValidationError("coupled_column requires coupled mode");
  }
  const Eigen::Index n = coords_.rows();
  const Eigen::Index d = coords_.cols();
  Eigen::MatrixXd mixed(n * d, points_.cols());
  for (Eigen::Index k = 0; k < n; ++k) {
    mixed.middleRows(k * d, d) = hessian_yx(points_, coords_, static_cast<int>(k), anchor);
  }
  auto project = [&](const Eigen::MatrixXd& m) -> Eigen::MatrixXd {
    return m - nullspace_ * (nullspace_.transpose() * m);
  };
  return -project(regularized_.solve(project(mixed)));
}

JacobianBlock MdsImplicitTransform::jacobian(int anchor) const {
  if (anchor < 0 || anchor >= coords_.rows()) {
    throw ValidationError("anchor " + std::to_string(anchor) + " out of range");
  }
  const Eigen::MatrixXd h = hessian_yy(points_, coords_, anchor, anchor);
  JacobianBlock out;
  if (options_.mode == XformMode::kPointwise) {
    out = solve_implicit(h, hessian_yx(points_, coords_, anchor, anchor), options_.cond_cap);
  } else {
    out = solve_implicit(h, Eigen::MatrixXd::Zero(h.rows(), points_.cols()), options_.cond_cap);
    const Eigen::Index d = coords_.cols();
    out.matrix = coupled_column(anchor).middleRows(anchor * d, d);
  }
  out.anchor = anchor;
  return out;
}

JacobianBlock implicit_jacobian(const DataMatrix& data, const Embedding& embedding, int anchor,
                                const ImplicitOptions& options) {
  return MdsImplicitTransform(data, embedding, options).jacobian(anchor);
}

Eigen::VectorXd finite_difference_steps(const DataMatrix& data,
                                        const FiniteDifferenceOptions& options) {
  const Eigen::Index dim = data.values.cols();
  if (options.step) {
    if (!(*options.step > 0.0)) throw ValidationError("finite-difference step must be > 0");
    return Eigen::VectorXd::Constant(dim, *options.step);
  }
  const Eigen::RowVectorXd mean = data.values.colwise().mean();
  const Eigen::RowVectorXd sd =
      ((data.values.rowwise() - mean).array().square().colwise().sum() /
       static_cast<double>(data.values.rows()))
          .sqrt();
  const double fallback = sd.maxCoeff() > 0.0 ? sd.maxCoeff() : 1.0;
  Eigen::VectorXd steps(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    steps[j] = options.relative_step * (sd[j] > 0.0 ? sd[j] : fallback);
  }
  return steps;
}

JacobianBlock finite_difference_jacobian(const DataMatrix& data, const Embedding& embedding,
                                         int anchor, const FiniteDifferenceOptions& options) {
  const Eigen::Index n = data.values.rows();
  const Eigen::Index dim = data.values.cols();
  if (anchor < 0 || anchor >= n) {
    throw ValidationError("anchor " + std::to_string(anchor) + " out of range");
  }
  if (embedding.coords.rows() != n) throw ValidationError("embedding does not match data");
  const Eigen::Index d = embedding.coords.cols();
  const Eigen::VectorXd steps = finite_difference_steps(data, options);
  const Eigen::MatrixXd base_delta = pairwise_distances(data.values);
  const double mean_delta = base_delta.sum() / static_cast<double>(n * (n - 1));

  PolishOptions polish;
  polish.grad_tol = options.relative_grad_tol * static_cast<double>(n) * mean_delta;
  polish.max_iters = options.max_iters;
  if (options.mode == XformMode::kPointwise) polish.free_points = {anchor};

  auto solve_shifted = [&](Eigen::Index axis, double shift) -> Eigen::VectorXd {
    Eigen::MatrixXd delta = base_delta;
    Eigen::RowVectorXd moved = data.values.row(anchor);
    moved[axis] += shift;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == anchor) continue;
      const double dist = (moved - data.values.row(k)).norm();
      delta(anchor, k) = dist;
      delta(k, anchor) = dist;
    }
    Eigen::MatrixXd y = embedding.coords;
    const PolishResult pr = polish_stress(StressObjective(std::move(delta)), y, polish);
    if (!pr.converged) {
      throw NumericalError("finite-difference re-optimization did not converge for dimension " +
                           std::to_string(axis) + " (gradient norm " +
                           std::to_string(pr.gradient_norm) + ")");
    }
    return y.row(anchor).transpose();
  };

  JacobianBlock out;
  out.anchor = anchor;
  out.matrix.resize(d, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double h = steps[j];
    out.matrix.col(j) = (solve_shifted(j, h) - solve_shifted(j, -h)) / (2.0 * h);
  }
  out.hessian_block = hessian_yy(data.values, embedding.coords, anchor, anchor);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.hessian_block);
  const double lo = es.eigenvalues().cwiseAbs().minCoeff();
  out.hessian_cond = lo > 0.0 ? es.eigenvalues().cwiseAbs().maxCoeff() / lo
                              : std::numeric_limits<double>::infinity();
  return out;
}

JacobianBlock finite_difference_jacobian_linear(const LinearMap& map, const DataMatrix& data,
                                                int anchor,
                                                const FiniteDifferenceOptions& options) {
  const Eigen::VectorXd steps = finite_difference_steps(data, options);
  JacobianBlock out;
  out.anchor = anchor;
  out.matrix.resize(map.output_dims(), map.input_dims());
  for (int j = 0; j < map.input_dims(); ++j) {
    Eigen::MatrixXd shifted(2, map.input_dims());
    shifted.row(0) = data.values.row(anchor);
    shifted.row(1) = data.values.row(anchor);
    shifted(0, j) += steps[j];
    shifted(1, j) -= steps[j];
    const Eigen::MatrixXd p = project_points(map, shifted);
    out.matrix.col(j) = (p.row(0) - p.row(1)).transpose() / (2.0 * steps[j]);
  }
  out.hessian_block = 2.0 * Eigen::MatrixXd::Identity(map.output_dims(), map.output_dims());
  out.hessian_cond = 1.0;
  return out;
}

TransformedSubspace transform_subspace(const JacobianBlock& jacobian,
                                       const LocalSubspace& subspace, XformMethod method) {
  if (jacobian.matrix.cols() != subspace.basis.cols()) {
    throw ValidationError("Jacobian expects " + std::to_string(jacobian.matrix.cols()) +
                          " input dimensions, subspace has " +
                          std::to_string(subspace.basis.cols()));
  }
  TransformedSubspace out;
  out.anchor = subspace.anchor;
  out.method = method;
  out.raw_vectors = subspace.basis * jacobian.matrix.transpose();
  out.vectors = subspace.weights.asDiagonal() * out.raw_vectors;
  return out;
}

}  // namespace subspace_lens
