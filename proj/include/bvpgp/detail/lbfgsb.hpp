#pragma once

#include <Eigen/Core>
#include <cmath>
#include <deque>
#include <limits>
#include <utility>

#include "bvpgp/domain.hpp"

namespace bvpgp::detail {

struct BoxMinimizeResult {
  Vector z;
  double value = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
  double pg_inf_norm = std::numeric_limits<double>::infinity();
};

inline Vector clip_to_box(Vector z, const Vector& lo, const Vector& hi) {
  return z.cwiseMax(lo).cwiseMin(hi);
}

// Gradient with components blocked by an active bound zeroed out.
inline Vector projected_gradient(const Vector& z, const Vector& g,
                                 const Vector& lo, const Vector& hi) {
  Vector pg = g;
  for (Index i = 0; i < z.size(); ++i) {
    if (z[i] <= lo[i] && g[i] > 0.0) pg[i] = 0.0;
    if (z[i] >= hi[i] && g[i] < 0.0) pg[i] = 0.0;
  }
  return pg;
}

// Bound-constrained limited-memory quasi-Newton minimization: two-loop
// recursion for the direction, search path projected onto the box, Armijo
// backtracking. F is double(const Vector&, Vector& grad); it may return
// +inf to mark infeasible points.
template <typename F>
BoxMinimizeResult lbfgs_box_minimize(F&& f, Vector z0, const Vector& lo,
                                     const Vector& hi, int max_iter,
                                     double gtol) {
  constexpr int kHistory = 8;
  constexpr double kArmijo = 1e-4;

  BoxMinimizeResult res;
  Vector z = clip_to_box(std::move(z0), lo, hi);
  Vector g(z.size());
  double v = f(z, g);
  if (!std::isfinite(v)) {
    res.z = z;
    res.value = v;
    return res;
  }

  std::deque<std::pair<Vector, Vector>> pairs;  // (s, y)
  for (int iter = 0; iter < max_iter; ++iter) {
    res.iterations = iter;
    const Vector pg = projected_gradient(z, g, lo, hi);
    res.pg_inf_norm = pg.lpNorm<Eigen::Infinity>();
    if (res.pg_inf_norm <= gtol) {
      res.converged = true;
      break;
    }

    // Two-loop recursion.
    Vector d = -g;
    if (!pairs.empty()) {
      Vector alpha_coef(static_cast<Index>(pairs.size()));
      Index k = static_cast<Index>(pairs.size()) - 1;
      for (auto it = pairs.rbegin(); it != pairs.rend(); ++it, --k) {
        const double rho = 1.0 / it->second.dot(it->first);
        alpha_coef[k] = rho * it->first.dot(d);
        d -= alpha_coef[k] * it->second;
      }
      const auto& last = pairs.back();
      d *= last.first.dot(last.second) / last.second.squaredNorm();
      k = 0;
      for (auto it = pairs.begin(); it != pairs.end(); ++it, ++k) {
        const double rho = 1.0 / it->second.dot(it->first);
        const double beta = rho * it->second.dot(d);
        d += (alpha_coef[k] - beta) * it->first;
      }
    }
    for (Index i = 0; i < z.size(); ++i) {
      if (z[i] <= lo[i] && d[i] < 0.0) d[i] = 0.0;
      if (z[i] >= hi[i] && d[i] > 0.0) d[i] = 0.0;
    }
    if (d.dot(g) >= 0.0) {
      pairs.clear();
      d = -pg;
    }

    // Backtracking along the projected path.
    double step = 1.0;
    bool accepted = false;
    Vector z_new, g_new(z.size());
    double v_new = v;
    for (int ls = 0; ls < 40; ++ls) {
      z_new = clip_to_box(z + step * d, lo, hi);
      const Vector dz = z_new - z;
      if (dz.lpNorm<Eigen::Infinity>() <
          1e-16 * (1.0 + z.lpNorm<Eigen::Infinity>()))
        break;
      v_new = f(z_new, g_new);
      if (std::isfinite(v_new) && v_new <= v + kArmijo * g.dot(dz)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (pairs.empty()) break;  // stalled even on steepest descent
      pairs.clear();
      continue;
    }

    const Vector s = z_new - z;
    const Vector y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      pairs.emplace_back(s, y);
      if (static_cast<int>(pairs.size()) > kHistory) pairs.pop_front();
    }
    z = std::move(z_new);
    g = g_new;
    v = v_new;
  }

  const Vector pg = projected_gradient(z, g, lo, hi);
  res.pg_inf_norm = pg.lpNorm<Eigen::Infinity>();
  if (res.pg_inf_norm <= gtol) res.converged = true;
  res.z = std::move(z);
  res.value = v;
  return res;
}

}  // namespace bvpgp::detail
