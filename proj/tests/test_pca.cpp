#include "oracles/oracles.hpp"
#include "subspace_lens/error.hpp"
#include "subspace_lens/pca.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace subspace_lens;

namespace {

Eigen::MatrixXd covariance(const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  return c.transpose() * c / static_cast<double>(x.rows());
}

}  // namespace

TEST(Pca, AxisAlignedIsIdentity) {
  const double a = 2.0 * std::sqrt(2.0);
  const double b = std::sqrt(2.0);
  Eigen::MatrixXd v(4, 2);
  v << a, 0, -a, 0, 0, b, 0, -b;
  const LinearMap m = fit_pca(make_data(v));
  EXPECT_TRUE(m.matrix.isApprox(Eigen::Matrix2d::Identity(), 1e-12));
  EXPECT_NEAR(m.eigenvalues(0), 4.0, 1e-12);
  EXPECT_NEAR(m.eigenvalues(1), 1.0, 1e-12);
}

TEST(Pca, EmbeddedPlaneSpan) {
  std::mt19937_64 rng(3);
  Eigen::MatrixXd v = oracle::gaussian(30, 3, rng);
  v.col(2).setZero();
  const LinearMap m = fit_pca(make_data(v));
  EXPECT_NEAR(m.matrix.col(2).norm(), 0.0, 1e-12);
}

TEST(Pca, MatchesJacobiOnRandomGaussian) {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd v = oracle::gaussian(40, 5, rng);
  const LinearMap m = fit_pca(make_data(v));
  const oracle::Eigen2 ref = oracle::jacobi_eigen(covariance(v));
  for (int r = 0; r < 2; ++r) {
    EXPECT_NEAR(m.eigenvalues(r), ref.values(r), 1e-10);
    EXPECT_NEAR(std::abs(m.matrix.row(r).dot(ref.vectors.col(r))), 1.0, 1e-10);
  }
}

TEST(Pca, GramPathWhenDimsExceedRows) {
  std::mt19937_64 rng(12);
  const Eigen::MatrixXd v = oracle::gaussian(6, 12, rng);
  const LinearMap m = fit_pca(make_data(v));
  const oracle::Eigen2 ref = oracle::jacobi_eigen(covariance(v));
  for (int r = 0; r < 2; ++r) {
    EXPECT_NEAR(m.eigenvalues(r), ref.values(r), 1e-10);
    EXPECT_NEAR(std::abs(m.matrix.row(r).dot(ref.vectors.col(r))), 1.0, 1e-10);
  }
}

TEST(Pca, Invariants) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const Eigen::MatrixXd v = oracle::gaussian(25, 2 + t % 6, rng);
    const LinearMap m = fit_pca(make_data(v));
    const Eigen::MatrixXd gram = m.matrix * m.matrix.transpose();
    EXPECT_TRUE(gram.isApprox(Eigen::Matrix2d::Identity(), 1e-10));
    EXPECT_GE(m.eigenvalues(0), m.eigenvalues(1));
    EXPECT_GE(m.eigenvalues(1), 0.0);
    for (int r = 0; r < 2; ++r) {
      Eigen::Index arg = 0;
      m.matrix.row(r).cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(m.matrix(r, arg), 0.0);
    }
  }
}

TEST(Pca, RankDeficientReportsRank) {
  Eigen::MatrixXd v(5, 3);
  for (int i = 0; i < 5; ++i) v.row(i) = i * Eigen::RowVector3d(1, 2, 3);
  try {
    fit_pca(make_data(v));
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("rank 1"), std::string::npos) << e.what();
  }
}

TEST(Project, CenteringAndBasisImage) {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd v = oracle::gaussian(20, 4, rng);
  const LinearMap m = fit_pca(make_data(v));
  Eigen::MatrixXd pts(2, 4);
  pts.row(0) = m.mean.transpose();
  pts.row(1) = m.mean.transpose() + m.matrix.row(0);
  const Eigen::MatrixXd p = project_points(m, pts);
  EXPECT_NEAR(p.row(0).norm(), 0.0, 1e-12);
  EXPECT_NEAR(p(1, 0), 1.0, 1e-12);
  EXPECT_NEAR(p(1, 1), 0.0, 1e-12);
}

TEST(Project, BatchEqualsSerial) {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd v = oracle::gaussian(10, 4, rng);
  const LinearMap m = fit_pca(make_data(v));
  const Eigen::MatrixXd batch = project_points(m, v);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(batch.row(i), project_points(m, v.row(i)).row(0));
  }
  EXPECT_THROW(project_points(m, Eigen::MatrixXd::Zero(1, 3)), ValidationError);
}

TEST(TransformLinear, ZeroBasisAndKernel) {
  std::mt19937_64 rng(9);
  const Eigen::MatrixXd v = oracle::gaussian(30, 4, rng);
  const LinearMap m = fit_pca(make_data(v));
  EXPECT_EQ(transform_vectors_linear(m, Eigen::RowVectorXd::Zero(4)).norm(), 0.0);
  const Eigen::MatrixXd e1 = transform_vectors_linear(m, m.matrix.row(0));
  EXPECT_NEAR(e1(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(e1(0, 1), 0.0, 1e-12);
  // Orthogonal complement of the row space.
  const Eigen::MatrixXd kernel = m.matrix.fullPivLu().kernel().transpose();
  EXPECT_NEAR(transform_vectors_linear(m, kernel).norm(), 0.0, 1e-12);
}

TEST(TransformLinear, LinearityAffineAndContraction) {
  std::mt19937_64 rng(10);
  const Eigen::MatrixXd v = oracle::gaussian(30, 5, rng);
  const LinearMap m = fit_pca(make_data(v));
  for (int t = 0; t < 20; ++t) {
    const Eigen::MatrixXd uv = oracle::gaussian(2, 5, rng);
    const double a = 1.7;
    const double b = -0.3;
    const Eigen::MatrixXd lhs = transform_vectors_linear(m, a * uv.row(0) + b * uv.row(1));
    const Eigen::MatrixXd rhs = a * transform_vectors_linear(m, uv.row(0)) +
                                b * transform_vectors_linear(m, uv.row(1));
    EXPECT_LE((lhs - rhs).norm(), 1e-12);

    const Eigen::MatrixXd p = v.row(t);
    const Eigen::MatrixXd shifted = p + uv.row(0);
    const Eigen::MatrixXd diff = project_points(m, shifted) - project_points(m, p);
    EXPECT_LE((diff - transform_vectors_linear(m, uv.row(0))).norm(), 1e-12);

    EXPECT_LE(transform_vectors_linear(m, uv.row(0)).norm(), uv.row(0).norm() + 1e-12);
  }
}
