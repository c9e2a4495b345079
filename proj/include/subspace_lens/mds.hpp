#pragma once

#include "subspace_lens/ingest.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace subspace_lens {

/// Embedded coordinates plus optimizer diagnostics.
struct Embedding {
  Eigen::MatrixXd coords;  // N x d
  double stress_total = 0.0;
  std::vector<double> stress_history;  // majorization, then polish
  int majorization_iterations = 0;
  int polish_iterations = 0;
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
  double gradient_norm = 0.0;  // max_i |dF/dy_i| at termination
  double grad_tol = 0.0;
  std::vector<std::string> warnings;
};

enum class SmacofInit { kRandom, kPca };

std::string to_string(SmacofInit init);
SmacofInit parse_smacof_init(const std::string& name);

struct SmacofConfig {
  int output_dims = 2;
  int max_iters = 3000;
  double rel_tol = 1e-9;
  /// Absolute bound on max_i |dF/dy_i|; 1e-8 * N when unset.
  std::optional<double> grad_tol;
  std::uint64_t seed = 0;
  SmacofInit init = SmacofInit::kRandom;
  int max_polish_iters = 50000;
  /// Majorization also stops once F <= floor * sum of squared dissimilarities.
  double relative_stress_floor = 1e-20;
};

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& points);

/// F = 1/2 sum_i sum_j (|x_i - x_j| - |y_i - y_j|)^2 over ordered pairs.
double stress(const DataMatrix& data, const Eigen::MatrixXd& coords);

/// Row i: 2 sum_{j != i} (1 - |x_i - x_j| / |y_i - y_j|)(y_i - y_j).
/// Throws NumericalError naming the pair when two embedded points coincide.
Eigen::MatrixXd stress_gradient(const DataMatrix& data, const Eigen::MatrixXd& coords);

/// Separation guard used by every derivative: 1e-9 times the embedding diameter.
double coincidence_eps(const Eigen::MatrixXd& coords);

/// Throws NumericalError if any embedded pair is closer than coincidence_eps.
void require_separated(const Eigen::MatrixXd& coords);

/// Stress objective over a fixed dissimilarity matrix.
class StressObjective {
 public:
  explicit StressObjective(Eigen::MatrixXd dissimilarities);
  static StressObjective from_data(const DataMatrix& data);

  double value(const Eigen::MatrixXd& coords) const;
  Eigen::MatrixXd gradient(const Eigen::MatrixXd& coords) const;
  Eigen::RowVectorXd gradient_row(const Eigen::MatrixXd& coords, int i) const;
  /// F(coords + step) - F(coords), evaluated pairwise so that differences far
  /// below the rounding level of F itself stay accurate. Only rows flagged in
  /// `moving` may carry a nonzero step.
  double change(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& step,
                const std::vector<bool>& moving) const;
  /// One Guttman transform (1/N) B(Y) Y.
  Eigen::MatrixXd guttman(const Eigen::MatrixXd& coords) const;

  const Eigen::MatrixXd& dissimilarities() const { return delta_; }
  int size() const { return static_cast<int>(delta_.rows()); }

 private:
  Eigen::MatrixXd delta_;
};

struct PolishOptions {
  double grad_tol = 1e-8;
  int max_iters = 50000;
  /// Rows allowed to move; empty means all.
  std::vector<int> free_points;
};

struct PolishResult {
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

/// Gradient descent with Barzilai-Borwein step lengths and an Armijo
/// backtracking line search on the accurate stress change. Monotone in F.
PolishResult polish_stress(const StressObjective& objective, Eigen::MatrixXd& coords,
                           const PolishOptions& options,
                           std::vector<double>* history = nullptr);

/// Majorization until the relative stress change drops below rel_tol, then
/// gradient polish until max_i |dF/dy_i| <= grad_tol.
Embedding run_smacof(const DataMatrix& data, const SmacofConfig& config);

}  // namespace subspace_lens
