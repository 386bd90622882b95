#include "bvpgp/eigenbasis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_util.hpp"

using namespace bvpgp;
using bvpgp::testing::apply_operator_fd;
using bvpgp::testing::trapezoid_1d;
using bvpgp::testing::trapezoid_2d;

namespace {

constexpr double kPi = std::numbers::pi;

TEST(Dirichlet1D, FirstEigenpair) {
  const auto basis = laplacian_1d_dirichlet_basis(4);
  EXPECT_NEAR(basis.lambda(0), kPi * kPi, 1e-12);
  EXPECT_NEAR(basis.eval(0, 0.5), std::numbers::sqrt2, 1e-14);
}

TEST(Dirichlet1D, VanishesOnBoundary) {
  const auto basis = laplacian_1d_dirichlet_basis(8);
  for (Index j = 0; j < basis.size(); ++j) {
    EXPECT_NEAR(basis.eval(j, 0.0), 0.0, 1e-14);
    EXPECT_NEAR(basis.eval(j, 1.0), 0.0, 1e-14);
  }
}

TEST(Dirichlet1D, SecondModeIsNormalized) {
  const auto basis = laplacian_1d_dirichlet_basis(2);
  const double norm2 = trapezoid_1d(
      [&](double x) { return basis.eval(1, x) * basis.eval(1, x); }, 10000);
  EXPECT_NEAR(norm2, 1.0, 1e-10);
}

TEST(Dirichlet1D, RejectsNonPositiveOrder) {
  EXPECT_THROW(laplacian_1d_dirichlet_basis(0), InvalidOrder);
}

TEST(Neumann1D, GradientVanishesOnBoundary) {
  const auto basis = laplacian_1d_neumann_basis(8);
  Vector x0(1), x1(1);
  x0 << 0.0;
  x1 << 1.0;
  for (Index j = 0; j < basis.size(); ++j) {
    EXPECT_NEAR(basis.gradient(j, x0)[0], 0.0, 1e-12);
    EXPECT_NEAR(basis.gradient(j, x1)[0], 0.0, 1e-12);
  }
}

TEST(Neumann1D, EigenEquationByFiniteDifferences) {
  const auto basis = laplacian_1d_neumann_basis(3);
  Vector x(1);
  x << 0.3;
  const auto phi1 = [&](const Vector& p) { return basis.eval(0, p[0]); };
  const double lhs = apply_operator_fd(phi1, 0.0, x, 1e-4);
  EXPECT_NEAR(lhs, kPi * kPi * basis.eval(0, 0.3), 1e-6);
}

TEST(Neumann1D, FirstTwoModesOrthogonal) {
  const auto basis = laplacian_1d_neumann_basis(2);
  const double inner = trapezoid_1d(
      [&](double x) { return basis.eval(0, x) * basis.eval(1, x); }, 10000);
  EXPECT_NEAR(inner, 0.0, 1e-10);
}

TEST(Neumann1D, ExcludesZeroMode) {
  const auto basis = laplacian_1d_neumann_basis(5);
  for (const auto& pair : basis.pairs()) EXPECT_GT(pair.lambda, 0.0);
  EXPECT_NEAR(basis.pairs().front().lambda, kPi * kPi, 1e-12);
}

TEST(Helmholtz2D, LowestEigenvalue) {
  const auto basis = helmholtz_2d_mixed_basis(3, 3.0);
  EXPECT_EQ(basis.size(), 9);
  EXPECT_NEAR(basis.lambda(0), kPi * kPi / 2.0 + 9.0, 1e-12);
  EXPECT_EQ(basis.pairs().front().index[0], 0);
  EXPECT_EQ(basis.pairs().front().index[1], 0);
}

TEST(Helmholtz2D, DirichletFacesVanish) {
  const auto basis = helmholtz_2d_mixed_basis(3, 3.0);
  for (Index j = 0; j < basis.size(); ++j) {
    for (double t : {0.0, 0.31, 0.77, 1.0}) {
      EXPECT_NEAR(basis.eval(j, 1.0, t), 0.0, 1e-13);
      EXPECT_NEAR(basis.eval(j, t, 1.0), 0.0, 1e-13);
    }
  }
}

TEST(Helmholtz2D, NeumannFacesHaveZeroNormalDerivative) {
  const auto basis = helmholtz_2d_mixed_basis(3, 3.0);
  for (Index j = 0; j < basis.size(); ++j) {
    for (double t : {0.0, 0.5, 0.9}) {
      Vector x_face(2), y_face(2);
      x_face << 0.0, t;
      y_face << t, 0.0;
      EXPECT_DOUBLE_EQ(basis.gradient(j, x_face)[0], 0.0);
      EXPECT_DOUBLE_EQ(basis.gradient(j, y_face)[1], 0.0);
    }
  }
}

TEST(Helmholtz2D, PairsSortedByEigenvalue) {
  const auto basis = helmholtz_2d_mixed_basis(4, 3.0);
  for (std::size_t i = 1; i < basis.pairs().size(); ++i)
    EXPECT_LE(basis.pairs()[i - 1].lambda, basis.pairs()[i].lambda);
}

TEST(BasisMatrix, SinglePointUnscaled) {
  const auto basis = laplacian_1d_dirichlet_basis(2);
  Matrix pts(1, 1);
  pts << 0.5;
  const Matrix phi = basis_matrix(basis, pts, false);
  ASSERT_EQ(phi.rows(), 1);
  ASSERT_EQ(phi.cols(), 2);
  EXPECT_NEAR(phi(0, 0), std::numbers::sqrt2, 1e-14);
  EXPECT_NEAR(phi(0, 1), 0.0, 1e-14);
}

TEST(BasisMatrix, LambdaScalingMultipliesColumns) {
  const auto basis = laplacian_1d_dirichlet_basis(2);
  Matrix pts(1, 1);
  pts << 0.5;
  const Matrix phi = basis_matrix(basis, pts, true);
  EXPECT_NEAR(phi(0, 0), kPi * kPi * std::numbers::sqrt2, 1e-12);
  EXPECT_NEAR(phi(0, 1), 0.0, 1e-12);
}

TEST(BasisMatrix, RejectsPointOutsideDomain) {
  const auto basis = laplacian_1d_dirichlet_basis(2);
  Matrix pts(1, 1);
  pts << 1.5;
  EXPECT_THROW(basis_matrix(basis, pts, false), PointOutsideDomain);
}

TEST(SpectralDensity, ClosedFormValues) {
  const Hyperparameters hp{1.0, 1.0, 0.0};
  EXPECT_NEAR(spectral_density_se(hp, 1, 0.0), std::sqrt(2.0 * kPi), 1e-14);
  EXPECT_NEAR(spectral_density_se(hp, 1, 1.0),
              std::sqrt(2.0 * kPi) * std::exp(-0.5), 1e-14);
}

TEST(SpectralDensity, MonotoneDecreasingInOmega) {
  const Hyperparameters hp{2.0, 0.4, 0.0};
  double prev = spectral_density_se(hp, 2, 0.0);
  for (double w = 0.5; w < 20.0; w += 0.5) {
    const double cur = spectral_density_se(hp, 2, w);
    EXPECT_LT(cur, prev);
    prev = cur;
  }
}

// Module invariants, checked across all three shipped families.

TEST(BasisInvariants, EigenEquationResidual) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  const EigenBasis bases[] = {laplacian_1d_dirichlet_basis(8),
                              laplacian_1d_neumann_basis(8),
                              helmholtz_2d_mixed_basis(3, 3.0)};
  for (const auto& basis : bases) {
    const double shift = basis.op().shift();
    for (Index j = 0; j < basis.size(); ++j) {
      const auto phi = [&](const Vector& p) { return basis.eval_point(j, p); };
      for (int rep = 0; rep < 100; ++rep) {
        Vector x(basis.dim());
        for (int a = 0; a < basis.dim(); ++a) x[a] = unif(rng);
        const double lphi = apply_operator_fd(phi, shift, x, 1e-4);
        const double lambda_phi = basis.lambda(j) * basis.eval_point(j, x);
        EXPECT_NEAR(lphi, lambda_phi, 1e-5 * (1.0 + basis.lambda(j)));
      }
    }
  }
}

TEST(BasisInvariants, BoundaryConditionsOnFaceSamples) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  {  // Dirichlet 1D: endpoint values
    const auto basis = laplacian_1d_dirichlet_basis(8);
    for (Index j = 0; j < basis.size(); ++j)
      for (double b : {0.0, 1.0}) EXPECT_LE(std::abs(basis.eval(j, b)), 1e-14);
  }
  {  // Neumann 1D: one-sided finite differences at the endpoints
    const auto basis = laplacian_1d_neumann_basis(8);
    const double h = 1e-6;
    for (Index j = 0; j < basis.size(); ++j) {
      const double left = (basis.eval(j, h) - basis.eval(j, 0.0)) / h;
      const double right = (basis.eval(j, 1.0) - basis.eval(j, 1.0 - h)) / h;
      EXPECT_LE(std::abs(left), 1e-4);
      EXPECT_LE(std::abs(right), 1e-4);
    }
  }
  {  // 2D mixed: Dirichlet values and Neumann one-sided differences
    const auto basis = helmholtz_2d_mixed_basis(3, 3.0);
    const double h = 1e-6;
    for (Index j = 0; j < basis.size(); ++j) {
      for (int rep = 0; rep < 100; ++rep) {
        const double t = unif(rng);
        EXPECT_LE(std::abs(basis.eval(j, 1.0, t)), 1e-13);
        EXPECT_LE(std::abs(basis.eval(j, t, 1.0)), 1e-13);
        const double dx =
            (basis.eval(j, h, t) - basis.eval(j, 0.0, t)) / h;
        const double dy =
            (basis.eval(j, t, h) - basis.eval(j, t, 0.0)) / h;
        EXPECT_LE(std::abs(dx), 1e-4);
        EXPECT_LE(std::abs(dy), 1e-4);
      }
    }
  }
}

TEST(BasisInvariants, GramMatrixIsIdentity1D) {
  for (const auto& basis :
       {laplacian_1d_dirichlet_basis(8), laplacian_1d_neumann_basis(8)}) {
    for (Index i = 0; i < basis.size(); ++i) {
      for (Index j = i; j < basis.size(); ++j) {
        const double g = trapezoid_1d(
            [&](double x) { return basis.eval(i, x) * basis.eval(j, x); },
            10000);
        EXPECT_NEAR(g, i == j ? 1.0 : 0.0, 1e-6);
      }
    }
  }
}

TEST(BasisInvariants, GramMatrixIsIdentity2D) {
  const auto basis = helmholtz_2d_mixed_basis(3, 3.0);
  for (Index i = 0; i < basis.size(); ++i) {
    for (Index j = i; j < basis.size(); ++j) {
      const double g = trapezoid_2d(
          [&](double x, double y) {
            return basis.eval(i, x, y) * basis.eval(j, x, y);
          },
          200);
      EXPECT_NEAR(g, i == j ? 1.0 : 0.0, 1e-6);
    }
  }
}

TEST(BasisInvariants, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  const EigenBasis bases[] = {laplacian_1d_dirichlet_basis(6),
                              laplacian_1d_neumann_basis(6),
                              helmholtz_2d_mixed_basis(3, 3.0)};
  for (const auto& basis : bases) {
    for (Index j = 0; j < basis.size(); ++j) {
      for (int rep = 0; rep < 20; ++rep) {
        Vector x(basis.dim());
        for (int a = 0; a < basis.dim(); ++a) x[a] = unif(rng);
        const Vector grad = basis.gradient(j, x);
        for (int a = 0; a < basis.dim(); ++a) {
          const double fd = bvpgp::testing::central_fd(
              [&](double t) {
                Vector xt = x;
                xt[a] = t;
                return basis.eval_point(j, xt);
              },
              x[a], 1e-6);
          EXPECT_NEAR(grad[a], fd, 1e-4 * (1.0 + std::abs(grad[a])));
        }
      }
    }
  }
}

}  // namespace
