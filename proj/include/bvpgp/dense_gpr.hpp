#pragma once

#include <cmath>
#include <numbers>

#include "bvpgp/detail/linalg.hpp"
#include "bvpgp/domain.hpp"
#include "bvpgp/errors.hpp"
#include "bvpgp/kernels.hpp"

namespace bvpgp {

// Pointwise posterior over a set of target points.
struct Posterior {
  Vector mean;
  Vector variance;
};

// Exact Gaussian process regression state: lower Cholesky factor of
// K + sigma^2 I and the solved weights alpha = (K + sigma^2 I)^{-1} y.
// The mean function is zero throughout.
template <typename Kernel>
struct DenseModel {
  Kernel kernel;
  Dataset data;
  Hyperparameters hp;
  Matrix chol_lower;
  Vector alpha;
};

// Joint covariance over the dataset, entry (i,j) selected by the pair of
// observation kinds.
template <typename Kernel>
Matrix assemble_covariance(const Kernel& kernel, const Dataset& ds) {
  const Index n = ds.rows();
  Matrix k(n, n);
  for (Index i = 0; i < n; ++i) {
    const Vector xi = ds.points.row(i);
    for (Index j = 0; j <= i; ++j) {
      const Vector xj = ds.points.row(j);
      k(i, j) = kernel_entry(kernel, ds.kinds[i], ds.kinds[j], xi, xj);
      k(j, i) = k(i, j);
    }
  }
  return k;
}

template <typename Kernel>
Matrix assemble_covariance_gradient(const Kernel& kernel, const Dataset& ds,
                                    HyperParam which) {
  const Index n = ds.rows();
  Matrix dk(n, n);
  for (Index i = 0; i < n; ++i) {
    const Vector xi = ds.points.row(i);
    for (Index j = 0; j <= i; ++j) {
      const Vector xj = ds.points.row(j);
      dk(i, j) =
          kernel_entry_gradient(kernel, which, ds.kinds[i], ds.kinds[j], xi, xj);
      dk(j, i) = dk(i, j);
    }
  }
  return dk;
}

template <typename Kernel>
DenseModel<Kernel> fit_dense(const Kernel& kernel, const Dataset& ds,
                             const Hyperparameters& hp) {
  if (ds.rows() == 0) throw EmptyDataset();
  if (!(hp.s2 > 0.0) || !(hp.ell > 0.0) || hp.sigma2 < 0.0)
    throw ValidationError("hyperparameters must satisfy s2 > 0, ell > 0, "
                          "sigma2 >= 0");
  DenseModel<Kernel> model{with_hp(kernel, hp), ds, hp, {}, {}};
  Matrix ktilde = assemble_covariance(model.kernel, ds);
  ktilde.diagonal().array() += hp.sigma2;
  // No silent jitter: breakdown surfaces as CholeskyFailure so the trainer
  // can treat the point as -inf likelihood.
  if (auto fail = detail::cholesky_lower_inplace(ktilde))
    throw CholeskyFailure(fail->pivot_index, fail->pivot_value);
  model.chol_lower = std::move(ktilde);
  model.alpha = detail::chol_solve(model.chol_lower, ds.values);
  return model;
}

template <typename Kernel>
Posterior predict_dense(const DenseModel<Kernel>& model, const Matrix& targets,
                        ObservationKind target_kind) {
  const Index n = model.data.rows();
  const Index t = targets.rows();
  Posterior post{Vector(t), Vector(t)};
  Vector q(n);
  for (Index i = 0; i < t; ++i) {
    const Vector xs = targets.row(i);
    for (Index j = 0; j < n; ++j) {
      const Vector xj = model.data.points.row(j);
      q[j] = kernel_entry(model.kernel, target_kind, model.data.kinds[j], xs, xj);
    }
    post.mean[i] = q.dot(model.alpha);
    const double prior = kernel_entry(model.kernel, target_kind, target_kind,
                                      xs, xs);
    const Vector w = model.chol_lower.triangularView<Eigen::Lower>().solve(q);
    double var = prior - w.squaredNorm();
    if (var < -1e-10 * std::max(prior, 1.0))
      throw NumericalError("posterior variance " + std::to_string(var) +
                           " is negative beyond rounding; covariance blocks "
                           "are inconsistent");
    post.variance[i] = std::max(var, 0.0);
  }
  return post;
}

template <typename Kernel>
double lml_dense(const DenseModel<Kernel>& model) {
  const double n = static_cast<double>(model.data.rows());
  return -0.5 * model.data.values.dot(model.alpha) -
         0.5 * detail::log_det_from_chol(model.chol_lower) -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

// d log p(y|X) / d theta via the trace identities, with K^{-1} applied
// through the stored Cholesky factor.
template <typename Kernel>
double lml_gradient_dense(const DenseModel<Kernel>& model, HyperParam which) {
  if (which == HyperParam::sigma2) {
    const Matrix kinv = detail::chol_inverse(model.chol_lower);
    return 0.5 * model.alpha.squaredNorm() - 0.5 * kinv.trace();
  }
  const Matrix dk =
      assemble_covariance_gradient(model.kernel, model.data, which);
  const Matrix kinv = detail::chol_inverse(model.chol_lower);
  const double quad = model.alpha.dot(dk * model.alpha);
  const double trace = (kinv.array() * dk.array()).sum();
  return 0.5 * quad - 0.5 * trace;
}

namespace detail {

// Value and full gradient in one pass, sharing the factor and K^{-1}
// across the three partials. Semantics match lml_dense/lml_gradient_dense.
template <typename Kernel>
void lml_value_and_gradient_dense(const DenseModel<Kernel>& model,
                                  double& value, Vector& grad) {
  value = lml_dense(model);
  grad.resize(3);
  const Matrix kinv = chol_inverse(model.chol_lower);
  const HyperParam params[2] = {HyperParam::s2, HyperParam::ell};
  for (int p = 0; p < 2; ++p) {
    const Matrix dk =
        assemble_covariance_gradient(model.kernel, model.data, params[p]);
    grad[p] = 0.5 * model.alpha.dot(dk * model.alpha) -
              0.5 * (kinv.array() * dk.array()).sum();
  }
  grad[2] = 0.5 * model.alpha.squaredNorm() - 0.5 * kinv.trace();
}

}  // namespace detail

}  // namespace bvpgp
