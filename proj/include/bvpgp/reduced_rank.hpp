#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "bvpgp/dense_gpr.hpp"
#include "bvpgp/detail/linalg.hpp"
#include "bvpgp/domain.hpp"
#include "bvpgp/errors.hpp"
#include "bvpgp/kernels.hpp"

namespace bvpgp {

// Noise variance pinned during noiseless-mode fits, matching the value the
// convergence studies use instead of a trainable sigma^2.
inline constexpr double kNoiselessSigma2 = 1e-17;

// Smallest trainable noise variance (sigma >= 1e-4 under the default box
// bounds). Below this, fits must be explicitly flagged noiseless.
inline constexpr double kSigma2Floor = 1e-8;

// Reduced-rank regression state built on the Woodbury identity:
//   (Phi Lambda Phi^T + sigma^2 I)^{-1} = (I - Phi Z^{-1} Phi^T) / sigma^2,
//   Z = sigma^2 Lambda^{-1} + Phi^T Phi.
// Solves cost O(M^3) after an O(N M^2) assembly.
struct ReducedModel {
  SpectralKernel kernel;
  Dataset data;
  Hyperparameters hp;
  bool noiseless = false;
  Matrix phi_joint;        // N x M
  Vector lambda_diag;      // Lambda_jj = S(sqrt(lambda_j))
  Matrix z;                // M x M
  Matrix z_chol;           // lower factor of Z
  Vector proj;             // Phi^T y
  double yty = 0.0;
  Index n = 0;             // observation count
};

namespace detail {

struct ReducedFactorization {
  Matrix z;
  Matrix z_chol;
};

inline void check_lambda_floor(const Vector& lambda_diag) {
  for (Index j = 0; j < lambda_diag.size(); ++j) {
    if (!(lambda_diag[j] >= 1e-300))
      throw ZFactorizationFailure(
          "spectral density underflowed at mode " + std::to_string(j) +
          " (S = " + std::to_string(lambda_diag[j]) +
          "); reduce M or the correlation length");
  }
}

inline ReducedFactorization factorize_z(const Matrix& phit_phi,
                                        const Vector& lambda_diag,
                                        double sigma2) {
  check_lambda_floor(lambda_diag);
  ReducedFactorization f;
  f.z = phit_phi;
  f.z.diagonal() += sigma2 * lambda_diag.cwiseInverse();
  f.z_chol = f.z;
  if (auto fail = cholesky_lower_inplace(f.z_chol))
    throw ZFactorizationFailure(
        "Z factorization failed at pivot " + std::to_string(fail->pivot_index) +
        " (value " + std::to_string(fail->pivot_value) + ")");
  return f;
}

}  // namespace detail

inline ReducedModel fit_reduced(const SpectralKernel& kernel, const Dataset& ds,
                                const Hyperparameters& hp,
                                bool noiseless = false) {
  if (ds.rows() == 0) throw EmptyDataset();
  Hyperparameters eff = hp;
  if (noiseless) {
    eff.sigma2 = kNoiselessSigma2;
    if (ds.rows() < kernel.basis.size())
      throw ValidationError(
          "noiseless mode requires at least M observations (n = " +
          std::to_string(ds.rows()) + " < M = " +
          std::to_string(kernel.basis.size()) +
          "); the fit is unstable below that");
  } else if (!(eff.sigma2 >= kSigma2Floor)) {
    throw NoiseFloorViolation(
        "sigma2 = " + std::to_string(eff.sigma2) + " is below the floor " +
        std::to_string(kSigma2Floor) + "; pass noiseless=true to pin it");
  }
  if (!(eff.s2 > 0.0) || !(eff.ell > 0.0))
    throw ValidationError("hyperparameters must satisfy s2 > 0, ell > 0");

  ReducedModel model;
  model.kernel = with_hp(kernel, eff);
  model.data = ds;
  model.hp = eff;
  model.noiseless = noiseless;
  JointGram gram = spectral_joint_gram(model.kernel, ds);
  model.phi_joint = std::move(gram.phi_joint);
  model.lambda_diag = std::move(gram.lambda_density);
  auto fac = detail::factorize_z(
      model.phi_joint.transpose() * model.phi_joint, model.lambda_diag,
      eff.sigma2);
  model.z = std::move(fac.z);
  model.z_chol = std::move(fac.z_chol);
  model.proj = model.phi_joint.transpose() * ds.values;
  model.yty = ds.values.squaredNorm();
  model.n = ds.rows();
  return model;
}

// mean = phi_*^T Z^{-1} Phi^T y, variance = sigma^2 phi_*^T Z^{-1} phi_*,
// with phi_* scaled by lambda_j for source targets.
inline Posterior predict_reduced(const ReducedModel& model,
                                 const Matrix& targets,
                                 ObservationKind target_kind) {
  const Matrix phi_star = basis_matrix(
      model.kernel.basis, targets, target_kind == ObservationKind::source);
  const Vector w = detail::chol_solve(model.z_chol, model.proj);
  Posterior post;
  post.mean = phi_star * w;
  Matrix half = model.z_chol.triangularView<Eigen::Lower>().solve(
      phi_star.transpose());
  post.variance = model.hp.sigma2 * half.colwise().squaredNorm().transpose();
  return post;
}

// log p(y|X) through the reduced forms:
//   log|K~| = (N - M) log sigma^2 + log|Z| + sum_j log Lambda_jj
//   y^T K~^{-1} y = (y^T y - y^T Phi Z^{-1} Phi^T y) / sigma^2.
inline double lml_reduced(const ReducedModel& model) {
  const double n = static_cast<double>(model.n);
  const double m = static_cast<double>(model.lambda_diag.size());
  const double log_det = (n - m) * std::log(model.hp.sigma2) +
                         detail::log_det_from_chol(model.z_chol) +
                         model.lambda_diag.array().log().sum();
  const Vector half =
      model.z_chol.triangularView<Eigen::Lower>().solve(model.proj);
  const double quad = (model.yty - half.squaredNorm()) / model.hp.sigma2;
  return -0.5 * log_det - 0.5 * quad -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

inline double lml_gradient_reduced(const ReducedModel& model,
                                   HyperParam which) {
  const double sigma2 = model.hp.sigma2;
  const Vector w = detail::chol_solve(model.z_chol, model.proj);  // Z^{-1} proj
  if (which == HyperParam::sigma2) {
    const double n = static_cast<double>(model.n);
    const double m = static_cast<double>(model.lambda_diag.size());
    const Vector zinv_diag = detail::chol_inverse_diagonal(model.z_chol);
    const double dlogdet =
        (n - m) / sigma2 + zinv_diag.dot(model.lambda_diag.cwiseInverse());
    const Vector half =
        model.z_chol.triangularView<Eigen::Lower>().solve(model.proj);
    const double quad_term = model.yty - half.squaredNorm();
    const double dquad =
        -quad_term / (sigma2 * sigma2) +
        w.cwiseQuotient(model.lambda_diag).dot(w) / sigma2;
    return -0.5 * dlogdet - 0.5 * dquad;
  }
  const Vector dlam = lambda_density_gradient(model.kernel, which);
  const Vector zinv_diag = detail::chol_inverse_diagonal(model.z_chol);
  // d log|K~| = -sigma^2 Tr(Z^{-1} Lambda^{-2} dLambda) + sum dLambda/Lambda
  double dlogdet = 0.0;
  for (Index j = 0; j < dlam.size(); ++j) {
    const double lam = model.lambda_diag[j];
    dlogdet += -sigma2 * zinv_diag[j] * dlam[j] / (lam * lam) + dlam[j] / lam;
  }
  // d (y^T K~^{-1} y) = -(Z^{-1} Phi^T y)^T Lambda^{-2} dLambda (Z^{-1} Phi^T y)
  double dquad = 0.0;
  for (Index j = 0; j < dlam.size(); ++j) {
    const double lam = model.lambda_diag[j];
    dquad -= w[j] * w[j] * dlam[j] / (lam * lam);
  }
  return -0.5 * dlogdet - 0.5 * dquad;
}

}  // namespace bvpgp
