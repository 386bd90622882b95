#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "bvpgp/domain.hpp"
#include "bvpgp/errors.hpp"

namespace bvpgp {

// Closed-form solution/source pair with the boundary value problem it
// solves. L u = f holds analytically; u satisfies the boundary conditions
// exactly.
struct ManufacturedProblem {
  std::string name;
  Domain domain;
  BoundaryConditionSpec bcs;
  OperatorSpec op;
  std::function<double(const Vector&)> u;
  std::function<double(const Vector&)> f;
};

// Best-of-`candidates` maximin Latin hypercube design on [0,1]^dim: each
// candidate places one point per axis stratum, uniformly within it; the
// design maximizing the minimum pairwise distance wins (first on ties).
inline Matrix lhc_maximin(int n, int dim, int candidates,
                          std::uint64_t rng_seed) {
  if (n < 1) throw ValidationError("lhc_maximin requires n >= 1");
  if (dim < 1) throw ValidationError("lhc_maximin requires dim >= 1");
  if (candidates < 1) throw ValidationError("lhc_maximin requires candidates >= 1");
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> perm(static_cast<std::size_t>(n));
  Matrix best;
  double best_score = -1.0;
  for (int c = 0; c < candidates; ++c) {
    Matrix pts(n, dim);
    for (int a = 0; a < dim; ++a) {
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int i = 0; i < n; ++i)
        pts(i, a) = (perm[static_cast<std::size_t>(i)] + unif(rng)) / n;
    }
    double score = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n && score > best_score; ++i)
      for (int j = i + 1; j < n; ++j)
        score = std::min(score,
                         (pts.row(i) - pts.row(j)).squaredNorm());
    if (score > best_score) {
      best_score = score;
      best = std::move(pts);
    }
  }
  return best;
}

// n equispaced points with endpoints 1/n and 1 - 1/n. The two-point case
// collapses to a repeated midpoint and is rejected.
inline Matrix uniform_grid_1d(int n) {
  if (n < 3)
    throw InvalidCount("uniform_grid_1d requires n >= 3 (n = " +
                       std::to_string(n) + " degenerates)");
  Matrix pts(n, 1);
  const double a = 1.0 / n;
  const double b = 1.0 - 1.0 / n;
  for (int i = 0; i < n; ++i)
    pts(i, 0) = a + (b - a) * i / (n - 1);
  return pts;
}

inline ManufacturedProblem manufactured(const std::string& name) {
  if (name == "poisson1d") {
    // -u'' = x on (0,1), u(0) = u(1) = 0.
    ManufacturedProblem p;
    p.name = name;
    p.domain = Domain::unit_interval();
    p.bcs = BoundaryConditionSpec::all_dirichlet(1);
    p.op = OperatorSpec::negative_laplacian();
    p.u = [](const Vector& x) {
      return -(x[0] * x[0] * x[0] - x[0]) / 6.0;
    };
    p.f = [](const Vector& x) { return x[0]; };
    return p;
  }
  if (name == "helmholtz2d") {
    // -laplacian u + 9 u = f on (0,1)^2, du/dn = 0 at x=0 and y=0,
    // u = 0 at x=1 and y=1.
    ManufacturedProblem p;
    p.name = name;
    p.domain = Domain::unit_square();
    p.bcs = BoundaryConditionSpec::neumann_low_dirichlet_high(2);
    p.op = OperatorSpec::helmholtz(3.0);
    const double c = p.op.shift();
    const auto g = [](double y) {
      return std::exp(-y) + y - (1.0 + std::exp(-1.0));
    };
    p.u = [g](const Vector& x) {
      return (1.0 - x[0] * x[0]) * (1.0 - x[1] * x[1]) +
             std::cos(std::numbers::pi * x[0] / 2.0) * g(x[1]);
    };
    p.f = [g, c](const Vector& x) {
      const double cosx = std::cos(std::numbers::pi * x[0] / 2.0);
      const double quarter_pi2 =
          std::numbers::pi * std::numbers::pi / 4.0;
      const double neg_lap = 2.0 * (1.0 - x[0] * x[0]) +
                             2.0 * (1.0 - x[1] * x[1]) +
                             quarter_pi2 * cosx * g(x[1]) -
                             cosx * std::exp(-x[1]);
      const double u = (1.0 - x[0] * x[0]) * (1.0 - x[1] * x[1]) +
                       cosx * g(x[1]);
      return neg_lap + c * u;
    };
    return p;
  }
  throw UnknownProblem(name);
}

// Samples u at sites_u and f at sites_f, tags the kinds in that order, and
// pollutes all values with one white-noise stream.
inline Dataset make_dataset(const ManufacturedProblem& problem,
                            const Matrix& sites_u, const Matrix& sites_f,
                            double sigma, std::uint64_t rng_seed) {
  const int dim = problem.domain.dim;
  const Index nu = sites_u.rows();
  const Index nf = sites_f.rows();
  if ((nu > 0 && sites_u.cols() != dim) || (nf > 0 && sites_f.cols() != dim))
    throw DimMismatch("observation sites do not match the problem dimension");
  Dataset ds;
  ds.points.resize(nu + nf, dim);
  ds.values.resize(nu + nf);
  for (Index i = 0; i < nu; ++i) {
    Vector x = sites_u.row(i);
    if (!problem.domain.contains(x)) throw PointOutsideDomain(i);
    ds.points.row(i) = sites_u.row(i);
    ds.values[i] = problem.u(x);
    ds.kinds.push_back(ObservationKind::solution);
  }
  for (Index i = 0; i < nf; ++i) {
    Vector x = sites_f.row(i);
    if (!problem.domain.contains(x)) throw PointOutsideDomain(nu + i);
    ds.points.row(nu + i) = sites_f.row(i);
    ds.values[nu + i] = problem.f(x);
    ds.kinds.push_back(ObservationKind::source);
  }
  ds.values = add_white_noise(ds.values, sigma, rng_seed);
  return ds;
}

}  // namespace bvpgp
