#include "subspace_lens/mds.hpp"

#include "subspace_lens/error.hpp"
#include "subspace_lens/pca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace subspace_lens {

std::string to_string(SmacofInit init) {
  return init == SmacofInit::kPca ? "pca" : "random";
}

SmacofInit parse_smacof_init(const std::string& name) {
  if (name == "random") return SmacofInit::kRandom;
  if (name == "pca") return SmacofInit::kPca;
  throw ValidationError("unknown SMACOF init '" + name + "'");
}

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (points.row(i) - points.row(j)).norm();
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return dist;
}

double coincidence_eps(const Eigen::MatrixXd& coords) {
  if (coords.rows() == 0) return 0.0;
  const Eigen::RowVectorXd lo = coords.colwise().minCoeff();
  const Eigen::RowVectorXd hi = coords.colwise().maxCoeff();
  return 1e-9 * (hi - lo).norm();
}

void require_separated(const Eigen::MatrixXd& coords) {
  const double eps = coincidence_eps(coords);
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < coords.rows(); ++j) {
      if ((coords.row(i) - coords.row(j)).norm() <= eps) {
        throw NumericalError("embedded points " + std::to_string(i) + " and " +
                             std::to_string(j) + " coincide");
      }
    }
  }
}

StressObjective::StressObjective(Eigen::MatrixXd dissimilarities)
    : delta_(std::move(dissimilarities)) {}

StressObjective StressObjective::from_data(const DataMatrix& data) {
  return StressObjective(pairwise_distances(data.values));
}

double StressObjective::value(const Eigen::MatrixXd& coords) const {
  const Eigen::Index n = coords.rows();
  // The ordered double sum counts each pair twice; the 1/2 cancels that.
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = delta_(i, j) - (coords.row(i) - coords.row(j)).norm();
      total += r * r;
    }
  }
  return total;
}

Eigen::RowVectorXd StressObjective::gradient_row(const Eigen::MatrixXd& coords, int i) const {
  Eigen::RowVectorXd g = Eigen::RowVectorXd::Zero(coords.cols());
  for (Eigen::Index j = 0; j < coords.rows(); ++j) {
    if (j == i) continue;
    const Eigen::RowVectorXd diff = coords.row(i) - coords.row(j);
    const double d = diff.norm();
    g += 2.0 * (1.0 - delta_(i, j) / d) * diff;
  }
  return g;
}

Eigen::MatrixXd StressObjective::gradient(const Eigen::MatrixXd& coords) const {
  Eigen::MatrixXd g(coords.rows(), coords.cols());
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    g.row(i) = gradient_row(coords, static_cast<int>(i));
  }
  return g;
}

double StressObjective::change(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& step,
                               const std::vector<bool>& moving) const {
  const Eigen::Index n = coords.rows();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (!moving[static_cast<std::size_t>(i)] && !moving[static_cast<std::size_t>(j)]) continue;
      const Eigen::RowVectorXd before = coords.row(i) - coords.row(j);
      const Eigen::RowVectorXd shift = step.row(i) - step.row(j);
      const Eigen::RowVectorXd after = before + shift;
      const double d_old = before.norm();
      const double d_new = after.norm();
      const double denom = d_old + d_new;
      if (denom == 0.0) continue;
      // d_new - d_old without cancellation.
      const double dd = shift.dot(before + after) / denom;
      total += -dd * (2.0 * delta_(i, j) - d_old - d_new);
    }
  }
  return total;
}

Eigen::MatrixXd StressObjective::guttman(const Eigen::MatrixXd& coords) const {
  const Eigen::Index n = coords.rows();
  Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, coords.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const Eigen::RowVectorXd diff = coords.row(i) - coords.row(j);
      const double d = diff.norm();
      if (d > 0.0) next.row(i) += (delta_(i, j) / d) * diff;
    }
  }
  return next / static_cast<double>(n);
}

double stress(const DataMatrix& data, const Eigen::MatrixXd& coords) {
  if (coords.rows() != data.values.rows()) {
    throw ValidationError("stress: coordinate rows do not match data rows");
  }
  return StressObjective::from_data(data).value(coords);
}

Eigen::MatrixXd stress_gradient(const DataMatrix& data, const Eigen::MatrixXd& coords) {
  if (coords.rows() != data.values.rows()) {
    throw ValidationError("stress_gradient: coordinate rows do not match data rows");
  }
  require_separated(coords);
  return StressObjective::from_data(data).gradient(coords);
}

namespace {

double max_row_norm(const Eigen::MatrixXd& g, const std::vector<bool>& moving) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    if (moving[static_cast<std::size_t>(i)]) best = std::max(best, g.row(i).norm());
  }
  return best;
}

bool has_coincidence(const Eigen::MatrixXd& coords, const std::vector<bool>& moving, double eps) {
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < coords.rows(); ++j) {
      if (!moving[static_cast<std::size_t>(i)] && !moving[static_cast<std::size_t>(j)]) continue;
      if ((coords.row(i) - coords.row(j)).norm() <= eps) return true;
    }
  }
  return false;
}

}  // namespace

PolishResult polish_stress(const StressObjective& objective, Eigen::MatrixXd& coords,
                           const PolishOptions& options, std::vector<double>* history) {
  const Eigen::Index n = coords.rows();
  std::vector<bool> moving(static_cast<std::size_t>(n), options.free_points.empty());
  for (int i : options.free_points) moving[static_cast<std::size_t>(i)] = true;

  auto masked_gradient = [&](const Eigen::MatrixXd& y) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, y.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
      if (moving[static_cast<std::size_t>(i)]) {
        g.row(i) = objective.gradient_row(y, static_cast<int>(i));
      }
    }
    return g;
  };

  PolishResult result;
  const double eps = coincidence_eps(coords);
  double f = history && !history->empty() ? history->back() : objective.value(coords);
  Eigen::MatrixXd g = masked_gradient(coords);
  result.gradient_norm = max_row_norm(g, moving);
  // Curvature of the stress is at most about 4 * N per coordinate.
  double t = 1.0 / (4.0 * static_cast<double>(std::max<Eigen::Index>(n, 1)));
  const double t_min = t * 1e-12;
  const double t_max = t * 1e8;

  while (result.gradient_norm > options.grad_tol && result.iterations < options.max_iters) {
    const double g2 = g.squaredNorm();
    bool accepted = false;
    Eigen::MatrixXd trial;
    double df = 0.0;
    for (int attempt = 0; attempt < 60; ++attempt) {
      const Eigen::MatrixXd step = -t * g;
      trial = coords + step;
      if (!has_coincidence(trial, moving, eps)) {
        df = objective.change(coords, step, moving);
        if (df <= -1e-4 * t * g2) {
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) break;

    const Eigen::MatrixXd g_next = masked_gradient(trial);
    const Eigen::MatrixXd s = trial - coords;
    const Eigen::MatrixXd yv = g_next - g;
    const double sy = (s.array() * yv.array()).sum();
    if (sy > 0.0) {
      t = std::clamp(s.squaredNorm() / sy, t_min, t_max);
    } else {
      t = std::min(t * 2.0, t_max);
    }

    coords = trial;
    g = g_next;
    f += df;
    if (history) history->push_back(f);
    result.gradient_norm = max_row_norm(g, moving);
    ++result.iterations;
  }
  result.converged = result.gradient_norm <= options.grad_tol;
  return result;
}

Embedding run_smacof(const DataMatrix& data, const SmacofConfig& config) {
  validate(data);
  const Eigen::Index n = data.values.rows();
  const int dims = config.output_dims;
  const StressObjective objective = StressObjective::from_data(data);

  Embedding emb;
  emb.seed = config.seed;
  emb.grad_tol = config.grad_tol.value_or(1e-8 * static_cast<double>(n));

  std::mt19937_64 rng(config.seed);
  Eigen::MatrixXd y(n, dims);
  if (config.init == SmacofInit::kPca) {
    y = project_points(fit_pca(data, dims), data.values);
  } else {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int c = 0; c < dims; ++c) y(i, c) = gauss(rng);
    }
  }

  const double floor = config.relative_stress_floor *
                       objective.dissimilarities().squaredNorm() / 2.0;
  auto jitter_if_needed = [&](Eigen::MatrixXd& coords) {
    const double eps = coincidence_eps(coords);
    const std::vector<bool> all(static_cast<std::size_t>(n), true);
    if (!has_coincidence(coords, all, eps)) return false;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if ((coords.row(i) - coords.row(j)).norm() <= eps) {
          for (int c = 0; c < dims; ++c) coords(j, c) += eps * unit(rng);
          emb.warnings.push_back("jittered coincident embedded points " + std::to_string(i) +
                                 " and " + std::to_string(j));
        }
      }
    }
    return true;
  };

  jitter_if_needed(y);
  double f = objective.value(y);
  emb.stress_history.push_back(f);
  for (int it = 0; it < config.max_iters; ++it) {
    if (f <= floor) break;
    Eigen::MatrixXd next = objective.guttman(y);
    // A jitter would break the majorization bound, so restart the history
    // comparison from the jittered point.
    const bool jittered = jitter_if_needed(next);
    const double f_next = objective.value(next);
    ++emb.majorization_iterations;
    const double rel = (f - f_next) / std::max(f, std::numeric_limits<double>::min());
    // At rounding level the update can come out a few ulps worse; keep the
    // previous iterate and stop.
    if (!jittered && f_next > f) break;
    y = std::move(next);
    if (jittered && f_next > f) {
      emb.stress_history.clear();
    }
    emb.stress_history.push_back(f_next);
    f = f_next;
    if (!jittered && rel < config.rel_tol) break;
  }

  PolishOptions polish;
  polish.grad_tol = emb.grad_tol;
  polish.max_iters = config.max_polish_iters;
  const PolishResult pr = polish_stress(objective, y, polish, &emb.stress_history);
  emb.polish_iterations = pr.iterations;
  emb.iterations = emb.majorization_iterations + emb.polish_iterations;
  emb.gradient_norm = pr.gradient_norm;
  emb.converged = pr.converged;
  emb.coords = std::move(y);
  emb.stress_total = objective.value(emb.coords);
  if (!emb.converged) {
    emb.warnings.push_back("SMACOF did not reach grad_tol " + std::to_string(emb.grad_tol) +
                           " (gradient norm " + std::to_string(emb.gradient_norm) + ")");
  }
  return emb;
}

}  // namespace subspace_lens
