#pragma once

#include "subspace_lens/ingest.hpp"
#include "subspace_lens/local_subspace.hpp"
#include "subspace_lens/mds.hpp"
#include "subspace_lens/pca.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace subspace_lens {

enum class XformMethod { kImplicit, kFiniteDifference, kLinear };
enum class XformMode { kPointwise, kCoupled };

std::string to_string(XformMethod method);
std::string to_string(XformMode mode);
XformMethod parse_xform_method(const std::string& name);
XformMode parse_xform_mode(const std::string& name);

inline constexpr double kDefaultCondCap = 1e12;

/// d x D Jacobian of one embedded point with respect to its source point.
struct JacobianBlock {
  int anchor = 0;
  Eigen::MatrixXd matrix;         // d x D
  Eigen::MatrixXd hessian_block;  // d x d second derivative used in the solve
  double hessian_cond = 0.0;
  bool degenerate = false;
  std::string reason;             // set when degenerate
};

struct TransformedSubspace {
  int anchor = 0;
  Eigen::MatrixXd vectors;      // L x d, weights[i] * raw_vectors.row(i)
  Eigen::MatrixXd raw_vectors;  // L x d
  XformMethod method = XformMethod::kImplicit;
};

/// Second derivative of the stress with respect to y_i and y_j (d x d).
Eigen::MatrixXd mds_hessian_yy(const DataMatrix& data, const Eigen::MatrixXd& coords, int i,
                               int j);

/// Mixed second derivative of the stress with respect to y_i and x_j (d x D).
Eigen::MatrixXd mds_hessian_yx(const DataMatrix& data, const Eigen::MatrixXd& coords, int i,
                               int j);

/// Solves H J = -B for J. A Hessian whose condition number exceeds `cond_cap`
/// (or that is not positive definite) yields a pseudoinverse solution and a
/// `degenerate` flag.
JacobianBlock solve_implicit(const Eigen::MatrixXd& hessian, const Eigen::MatrixXd& mixed,
                             double cond_cap = kDefaultCondCap);

/// The PCA map as a minimizer: f(P, p) = |p - M(P - mean)|^2.
class QuadraticProjectionObjective {
 public:
  explicit QuadraticProjectionObjective(LinearMap map) : map_(std::move(map)) {}

  double value(const Eigen::VectorXd& point, const Eigen::VectorXd& projected) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& point, const Eigen::VectorXd& projected) const;
  Eigen::MatrixXd hessian_yy() const;  // 2 I
  Eigen::MatrixXd hessian_yx() const;  // -2 M

  JacobianBlock implicit_jacobian(int anchor = 0) const;

 private:
  LinearMap map_;
};

struct ImplicitOptions {
  XformMode mode = XformMode::kPointwise;
  bool force = false;
  double cond_cap = kDefaultCondCap;
};

/// Implicit-function Jacobians for an MDS embedding. The coupled mode factors
/// the full (N d) x (N d) Hessian once, with the rigid-motion nullspace
/// projected out, and reuses it for every anchor.
class MdsImplicitTransform {
 public:
  MdsImplicitTransform(const DataMatrix& data, const Embedding& embedding,
                       ImplicitOptions options = {});

  JacobianBlock jacobian(int anchor) const;

  /// Full (N d) x D derivative of all embedded coordinates w.r.t. x_anchor
  /// (coupled mode only; least-norm gauge).
  Eigen::MatrixXd coupled_column(int anchor) const;

 private:
  Eigen::MatrixXd points_;
  Eigen::MatrixXd coords_;
  ImplicitOptions options_;
  Eigen::MatrixXd nullspace_;  // orthonormal columns
  Eigen::PartialPivLU<Eigen::MatrixXd> regularized_;
};

JacobianBlock implicit_jacobian(const DataMatrix& data, const Embedding& embedding, int anchor,
                                const ImplicitOptions& options = {});

struct FiniteDifferenceOptions {
  /// Uniform absolute step. Defaults to 1e-4 * (population std of each column).
  std::optional<double> step;
  double relative_step = 1e-4;
  /// pointwise: only y_anchor is re-optimized; coupled: every embedded point is.
  XformMode mode = XformMode::kPointwise;
  /// Re-optimization tolerance on max_i |dF/dy_i|, relative to N * mean distance.
  double relative_grad_tol = 1e-13;
  int max_iters = 200000;
};

/// Central-difference Jacobian obtained by perturbing x_anchor along each axis
/// and re-optimizing the stress warm-started from `embedding`.
JacobianBlock finite_difference_jacobian(const DataMatrix& data, const Embedding& embedding,
                                         int anchor, const FiniteDifferenceOptions& options = {});

/// Central-difference Jacobian of a fitted linear map (constant in the anchor).
JacobianBlock finite_difference_jacobian_linear(const LinearMap& map, const DataMatrix& data,
                                                int anchor,
                                                const FiniteDifferenceOptions& options = {});

/// Per-column steps used by the finite-difference oracle.
Eigen::VectorXd finite_difference_steps(const DataMatrix& data,
                                        const FiniteDifferenceOptions& options);

TransformedSubspace transform_subspace(const JacobianBlock& jacobian,
                                       const LocalSubspace& subspace,
                                       XformMethod method = XformMethod::kImplicit);

}  // namespace subspace_lens
