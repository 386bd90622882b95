#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "bvpgp/domain.hpp"

namespace bvpgp::testing {

using ScalarField = std::function<double(const Vector&)>;

// L u at x by central second differences per axis: L = -laplacian + shift.
inline double apply_operator_fd(const ScalarField& u, double shift,
                                const Vector& x, double h) {
  double lap = 0.0;
  for (Index a = 0; a < x.size(); ++a) {
    Vector xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    lap += (u(xp) - 2.0 * u(x) + u(xm)) / (h * h);
  }
  return -lap + shift * u(x);
}

// Composite trapezoid on [0,1] with n+1 nodes.
inline double trapezoid_1d(const std::function<double(double)>& f, int n) {
  const double h = 1.0 / n;
  double sum = 0.5 * (f(0.0) + f(1.0));
  for (int i = 1; i < n; ++i) sum += f(i * h);
  return sum * h;
}

// Tensor trapezoid on [0,1]^2 with (n+1)^2 nodes.
inline double trapezoid_2d(const std::function<double(double, double)>& f,
                           int n) {
  const double h = 1.0 / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double wi = (i == 0 || i == n) ? 0.5 : 1.0;
    for (int j = 0; j <= n; ++j) {
      const double wj = (j == 0 || j == n) ? 0.5 : 1.0;
      sum += wi * wj * f(i * h, j * h);
    }
  }
  return sum * h * h;
}

// Central finite difference of a scalar function of one coordinate.
inline double central_fd(const std::function<double(double)>& f, double x,
                         double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline Matrix random_points(int n, int dim, std::mt19937_64& rng, double lo = 0.0,
                            double hi = 1.0) {
  std::uniform_real_distribution<double> unif(lo, hi);
  Matrix pts(n, dim);
  for (Index i = 0; i < pts.rows(); ++i)
    for (Index j = 0; j < pts.cols(); ++j) pts(i, j) = unif(rng);
  return pts;
}

inline Dataset random_mixed_dataset(int n, int dim, std::mt19937_64& rng,
                                    double interior_margin = 0.0) {
  Dataset ds;
  ds.points = random_points(n, dim, rng, interior_margin, 1.0 - interior_margin);
  ds.values.resize(n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < n; ++i) {
    ds.values[i] = gauss(rng);
    ds.kinds.push_back(coin(rng) ? ObservationKind::solution
                                 : ObservationKind::source);
  }
  return ds;
}

}  // namespace bvpgp::testing
