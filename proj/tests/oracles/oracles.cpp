#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oracle {

double stress(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  double f = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.rows(); ++j) {
      if (i == j) continue;
      const double dx = (x.row(i) - x.row(j)).norm();
      const double dy = (y.row(i) - y.row(j)).norm();
      f += (dx - dy) * (dx - dy);
    }
  }
  return 0.5 * f;
}

Eigen::MatrixXd stress_gradient_fd(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double h) {
  Eigen::MatrixXd g(y.rows(), y.cols());
  for (int r = 0; r < y.rows(); ++r) {
    for (int c = 0; c < y.cols(); ++c) {
      Eigen::MatrixXd plus = y;
      Eigen::MatrixXd minus = y;
      plus(r, c) += h;
      minus(r, c) -= h;
      g(r, c) = (stress(x, plus) - stress(x, minus)) / (2.0 * h);
    }
  }
  return g;
}

Eigen::MatrixXd jacobian_fd(const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& f,
                            const Eigen::MatrixXd& arg, double h) {
  const Eigen::MatrixXd f0 = f(arg);
  Eigen::MatrixXd out(f0.size(), arg.size());
  for (int r = 0; r < arg.rows(); ++r) {
    for (int c = 0; c < arg.cols(); ++c) {
      Eigen::MatrixXd plus = arg;
      Eigen::MatrixXd minus = arg;
      plus(r, c) += h;
      minus(r, c) -= h;
      const Eigen::MatrixXd diff = (f(plus) - f(minus)) / (2.0 * h);
      for (int a = 0; a < diff.rows(); ++a) {
        for (int b = 0; b < diff.cols(); ++b) {
          out(a * diff.cols() + b, r * arg.cols() + c) = diff(a, b);
        }
      }
    }
  }
  return out;
}

Eigen::MatrixXd block(const Eigen::MatrixXd& full, int i, int j, int a, int b) {
  return full.block(i * a, j * b, a, b);
}

std::vector<int> knn(const Eigen::MatrixXd& points, int anchor, int k) {
  std::vector<std::pair<double, int>> all;
  for (int j = 0; j < points.rows(); ++j) {
    if (j != anchor) all.emplace_back((points.row(j) - points.row(anchor)).norm(), j);
  }
  std::sort(all.begin(), all.end());
  std::vector<int> out;
  for (int t = 0; t < k; ++t) out.push_back(all[t].second);
  return out;
}

Trust trustworthiness(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int k) {
  const int n = static_cast<int>(x.rows());
  Trust t;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::vector<int> orig = knn(x, i, n - 1);  // full ranking
    std::vector<int> rank(n, 0);
    for (int r = 0; r < n - 1; ++r) rank[orig[r]] = r + 1;
    const std::vector<int> emb = knn(y, i, k);
    double penalty = 0.0;
    for (int j : emb) {
      if (rank[j] > k) penalty += rank[j] - k;
    }
    total += penalty;
    const double worst = k * (2.0 * n - 3.0 * k - 1.0) / 2.0;
    t.per_point.push_back(1.0 - penalty / worst);
  }
  t.global = 1.0 - 2.0 / (n * k * (2.0 * n - 3.0 * k - 1.0)) * total;
  return t;
}

Eigen2 jacobi_eigen(Eigen::MatrixXd a) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int r = 0; r < n; ++r) {
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (int r = 0; r < n; ++r) {
          const double apr = a(p, r);
          const double aqr = a(q, r);
          a(p, r) = c * apr - s * aqr;
          a(q, r) = s * apr + c * aqr;
        }
        for (int r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int l, int r) { return a(l, l) > a(r, r); });
  Eigen2 out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int t = 0; t < n; ++t) {
    out.values(t) = a(order[t], order[t]);
    out.vectors.col(t) = v.col(order[t]);
  }
  return out;
}

std::vector<Eigen::Vector2d> brute_force_hull(const std::vector<Eigen::Vector2d>& input,
                                              double tol) {
  std::vector<Eigen::Vector2d> pts;
  for (const auto& p : input) {
    bool seen = false;
    for (const auto& q : pts) seen = seen || (p - q).norm() == 0.0;
    if (!seen) pts.push_back(p);
  }
  auto less = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  };
  std::vector<Eigen::Vector2d> verts;
  auto add = [&](const Eigen::Vector2d& p) {
    for (const auto& q : verts)
      if ((p - q).norm() == 0.0) return;
    verts.push_back(p);
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      const Eigen::Vector2d a = pts[i];
      const Eigen::Vector2d b = pts[j];
      const Eigen::Vector2d ab = b - a;
      bool edge = true;
      for (std::size_t m = 0; m < pts.size() && edge; ++m) {
        if (m == i || m == j) continue;
        const Eigen::Vector2d ap = pts[m] - a;
        const double cross = (ab.x() * ap.y() - ab.y() * ap.x()) / ab.norm();
        if (cross > tol) continue;
        if (cross < -tol) {
          edge = false;
          continue;
        }
        const double t = ap.dot(ab) / ab.squaredNorm();
        if (t < 0.0 || t > 1.0) edge = false;
      }
      if (edge) {
        add(a);
        add(b);
      }
    }
  }
  if (pts.size() == 1) verts = pts;
  std::sort(verts.begin(), verts.end(), less);
  return verts;
}

Eigen::VectorXd compass_search(const std::function<double(const Eigen::VectorXd&)>& f,
                               Eigen::VectorXd x, double step, double min_step) {
  double fx = f(x);
  while (step > min_step) {
    bool improved = false;
    for (int c = 0; c < x.size(); ++c) {
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd trial = x;
        trial(c) += sign * step;
        const double ft = f(trial);
        if (ft < fx) {
          x = trial;
          fx = ft;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return x;
}

double hausdorff(const std::vector<Eigen::Vector2d>& a, const std::vector<Eigen::Vector2d>& b) {
  auto directed = [](const auto& p, const auto& q) {
    double worst = 0.0;
    for (const auto& u : p) {
      double best = INFINITY;
      for (const auto& v : q) best = std::min(best, (u - v).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

Eigen::MatrixXd gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = normal(rng);
  return m;
}

}  // namespace oracle
