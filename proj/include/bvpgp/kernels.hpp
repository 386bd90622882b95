#pragma once

#include <cmath>
#include <utility>

#include "bvpgp/domain.hpp"
#include "bvpgp/eigenbasis.hpp"
#include "bvpgp/errors.hpp"

namespace bvpgp {

// Squared-exponential kernel k(x,x') = s^2 exp(-|x-x'|^2 / (2 ell^2)).
// Covers solution observations only.
struct SEKernel {
  Hyperparameters hp;
};

// Co-kriging blocks for L = -laplacian + c applied to a squared-exponential
// parent: k11 = k, k12 = L_{x'} k, k21 = L_x k, k22 = L_x L_{x'} k.
struct OperatorKernelBlocks {
  SEKernel base;
  OperatorSpec op;
};

// Spectral expansion kernel k(x,x') = sum_j S(sqrt(lambda_j)) phi_j(x)
// phi_j(x'), rank <= M, satisfying the basis boundary conditions in each
// argument.
struct SpectralKernel {
  EigenBasis basis;
  Hyperparameters hp;
};

struct BlockValues {
  double k11 = 0.0, k12 = 0.0, k21 = 0.0, k22 = 0.0;
};

namespace detail {

inline void check_same_dim(const Eigen::Ref<const Vector>& x,
                           const Eigen::Ref<const Vector>& x2) {
  if (x.size() != x2.size())
    throw DimMismatch("kernel arguments have different dimensions");
}

// Closed forms for the operator-applied squared-exponential blocks as
// functions of rho = |x-x'|^2. With g = exp(-rho/(2 ell^2)), d the space
// dimension and c the zeroth-order coefficient of L = -laplacian + c:
//
//   laplacian_x k = laplacian_{x'} k = k (rho/ell^4 - d/ell^2)
//   laplacian_x laplacian_{x'} k
//     = k [ (rho/ell^4 - d/ell^2)^2 - 4 rho/ell^6 + 2 d/ell^4 ]
//
// so L_{x'} k = k (c + d/ell^2 - rho/ell^4) and the fourth-order block
// expands to the polynomial assembled below.
struct SeBlockTerms {
  double g = 0.0;        // exp(-rho / (2 ell^2))
  double p12 = 0.0;      // L_{x'} k / k
  double p22 = 0.0;      // L_x L_{x'} k / k
  double dp12_dell = 0.0;
  double dp22_dell = 0.0;
};

inline SeBlockTerms se_block_terms(int d, double c, double ell, double rho) {
  SeBlockTerms t;
  const double l2 = ell * ell;
  const double l3 = l2 * ell;
  const double l4 = l2 * l2;
  const double l5 = l4 * ell;
  const double l6 = l4 * l2;
  const double l7 = l6 * ell;
  const double l8 = l4 * l4;
  const double l9 = l8 * ell;
  t.g = std::exp(-0.5 * rho / l2);
  t.p12 = c + d / l2 - rho / l4;
  const double dd = static_cast<double>(d);
  t.p22 = rho * rho / l8 - (2.0 * dd + 4.0) * rho / l6 +
          (dd * dd + 2.0 * dd) / l4 - 2.0 * c * rho / l4 + 2.0 * c * dd / l2 +
          c * c;
  t.dp12_dell = -2.0 * dd / l3 + 4.0 * rho / l5;
  t.dp22_dell = -8.0 * rho * rho / l9 + 6.0 * (2.0 * dd + 4.0) * rho / l7 -
                4.0 * (dd * dd + 2.0 * dd) / l5 + 8.0 * c * rho / l5 -
                4.0 * c * dd / l3;
  return t;
}

}  // namespace detail

inline double se_eval(const SEKernel& kern, const Eigen::Ref<const Vector>& x,
                      const Eigen::Ref<const Vector>& x2) {
  detail::check_same_dim(x, x2);
  const double rho = (x - x2).squaredNorm();
  return kern.hp.s2 * std::exp(-0.5 * rho / (kern.hp.ell * kern.hp.ell));
}

inline BlockValues operator_blocks_eval(const OperatorKernelBlocks& blocks,
                                        const Eigen::Ref<const Vector>& x,
                                        const Eigen::Ref<const Vector>& x2) {
  detail::check_same_dim(x, x2);
  const int d = static_cast<int>(x.size());
  if (d != 1 && d != 2)
    throw UnsupportedOperator("operator blocks support dim 1 and 2 only");
  const double rho = (x - x2).squaredNorm();
  const auto t = detail::se_block_terms(d, blocks.op.shift(),
                                        blocks.base.hp.ell, rho);
  const double k = blocks.base.hp.s2 * t.g;
  // L is even in x - x', so the two cross blocks coincide pointwise.
  return {k, k * t.p12, k * t.p12, k * t.p22};
}

inline double spectral_eval(const SpectralKernel& kern,
                            const Eigen::Ref<const Vector>& x,
                            const Eigen::Ref<const Vector>& x2) {
  detail::check_same_dim(x, x2);
  if (!kern.basis.domain().contains(x)) throw PointOutsideDomain(0);
  if (!kern.basis.domain().contains(x2)) throw PointOutsideDomain(1);
  double sum = 0.0;
  for (Index j = 0; j < kern.basis.size(); ++j) {
    const double s = spectral_density_se(kern.hp, kern.basis.dim(),
                                         std::sqrt(kern.basis.lambda(j)));
    sum += s * kern.basis.eval_point(j, x) * kern.basis.eval_point(j, x2);
  }
  return sum;
}

// Diagonal of Lambda: S(sqrt(lambda_j)) in basis pair order.
inline Vector lambda_density(const SpectralKernel& kern) {
  Vector lam(kern.basis.size());
  for (Index j = 0; j < kern.basis.size(); ++j)
    lam[j] = spectral_density_se(kern.hp, kern.basis.dim(),
                                 std::sqrt(kern.basis.lambda(j)));
  return lam;
}

// d Lambda_jj / d theta for theta in {s2, ell}. The sigma2 derivative is
// zero (noise enters through the likelihood, not the prior).
inline Vector lambda_density_gradient(const SpectralKernel& kern,
                                      HyperParam which) {
  Vector lam = lambda_density(kern);
  switch (which) {
    case HyperParam::s2:
      return lam / kern.hp.s2;
    case HyperParam::ell: {
      const double d = kern.basis.dim();
      for (Index j = 0; j < lam.size(); ++j)
        lam[j] *= d / kern.hp.ell - kern.hp.ell * kern.basis.lambda(j);
      return lam;
    }
    case HyperParam::sigma2:
      return Vector::Zero(lam.size());
  }
  return lam;
}

struct JointGram {
  Matrix phi_joint;       // N x M, source rows scaled by lambda_j
  Vector lambda_density;  // M
};

// Row i of phi_joint is phi(x_i) for solution rows and lambda .* phi(x_i)
// for source rows, so phi_joint diag(Lambda) phi_joint^T reproduces the
// four-block joint covariance with factors 1, lambda_j, lambda_j^2.
inline JointGram spectral_joint_gram(const SpectralKernel& kern,
                                     const Dataset& ds) {
  JointGram g;
  g.phi_joint = basis_matrix(kern.basis, ds.points, false);
  for (Index i = 0; i < ds.rows(); ++i) {
    if (ds.kinds[i] == ObservationKind::source) {
      for (Index j = 0; j < kern.basis.size(); ++j)
        g.phi_joint(i, j) *= kern.basis.lambda(j);
    }
  }
  g.lambda_density = lambda_density(kern);
  return g;
}

// Entry of the joint covariance for a pair of observation kinds. Used by
// the dense path; the reduced path goes through spectral_joint_gram.
inline double kernel_entry(const SEKernel& kern, ObservationKind ki,
                           ObservationKind kj,
                           const Eigen::Ref<const Vector>& xi,
                           const Eigen::Ref<const Vector>& xj) {
  if (ki == ObservationKind::source || kj == ObservationKind::source)
    throw KindUnsupportedByKernel(
        "squared-exponential kernel has no source block; use the operator "
        "blocks kernel for source observations");
  return se_eval(kern, xi, xj);
}

inline double kernel_entry(const OperatorKernelBlocks& kern,
                           ObservationKind ki, ObservationKind kj,
                           const Eigen::Ref<const Vector>& xi,
                           const Eigen::Ref<const Vector>& xj) {
  const BlockValues b = operator_blocks_eval(kern, xi, xj);
  if (ki == ObservationKind::solution)
    return kj == ObservationKind::solution ? b.k11 : b.k12;
  return kj == ObservationKind::solution ? b.k21 : b.k22;
}

inline double kernel_entry(const SpectralKernel& kern, ObservationKind ki,
                           ObservationKind kj,
                           const Eigen::Ref<const Vector>& xi,
                           const Eigen::Ref<const Vector>& xj) {
  detail::check_same_dim(xi, xj);
  if (!kern.basis.domain().contains(xi)) throw PointOutsideDomain(0);
  if (!kern.basis.domain().contains(xj)) throw PointOutsideDomain(1);
  const int power = (ki == ObservationKind::source) +
                    (kj == ObservationKind::source);
  double sum = 0.0;
  for (Index j = 0; j < kern.basis.size(); ++j) {
    const double lam = kern.basis.lambda(j);
    const double s = spectral_density_se(kern.hp, kern.basis.dim(),
                                         std::sqrt(lam));
    sum += s * std::pow(lam, power) * kern.basis.eval_point(j, xi) *
           kern.basis.eval_point(j, xj);
  }
  return sum;
}

// d/d theta of a joint covariance entry, theta in {s2, ell}.
inline double kernel_entry_gradient(const SEKernel& kern, HyperParam which,
                                    ObservationKind ki, ObservationKind kj,
                                    const Eigen::Ref<const Vector>& xi,
                                    const Eigen::Ref<const Vector>& xj) {
  const double k = kernel_entry(kern, ki, kj, xi, xj);
  if (which == HyperParam::s2) return k / kern.hp.s2;
  if (which == HyperParam::sigma2) return 0.0;
  const double rho = (xi - xj).squaredNorm();
  return k * rho / std::pow(kern.hp.ell, 3);
}

inline double kernel_entry_gradient(const OperatorKernelBlocks& kern,
                                    HyperParam which, ObservationKind ki,
                                    ObservationKind kj,
                                    const Eigen::Ref<const Vector>& xi,
                                    const Eigen::Ref<const Vector>& xj) {
  if (which == HyperParam::s2)
    return kernel_entry(kern, ki, kj, xi, xj) / kern.base.hp.s2;
  if (which == HyperParam::sigma2) return 0.0;
  detail::check_same_dim(xi, xj);
  const int d = static_cast<int>(xi.size());
  const double ell = kern.base.hp.ell;
  const double rho = (xi - xj).squaredNorm();
  const auto t = detail::se_block_terms(d, kern.op.shift(), ell, rho);
  const double k = kern.base.hp.s2 * t.g;
  const double dk = k * rho / (ell * ell * ell);
  if (ki == ObservationKind::solution && kj == ObservationKind::solution)
    return dk;
  if (ki == ObservationKind::source && kj == ObservationKind::source)
    return dk * t.p22 + k * t.dp22_dell;
  return dk * t.p12 + k * t.dp12_dell;
}

inline double kernel_entry_gradient(const SpectralKernel& kern,
                                    HyperParam which, ObservationKind ki,
                                    ObservationKind kj,
                                    const Eigen::Ref<const Vector>& xi,
                                    const Eigen::Ref<const Vector>& xj) {
  if (which == HyperParam::sigma2) return 0.0;
  const Vector dlam = lambda_density_gradient(kern, which);
  const int power = (ki == ObservationKind::source) +
                    (kj == ObservationKind::source);
  double sum = 0.0;
  for (Index j = 0; j < kern.basis.size(); ++j) {
    sum += dlam[j] * std::pow(kern.basis.lambda(j), power) *
           kern.basis.eval_point(j, xi) * kern.basis.eval_point(j, xj);
  }
  return sum;
}

// Rebind a kernel to new hyperparameters (the trainer calls this per step).
inline SEKernel with_hp(const SEKernel&, const Hyperparameters& hp) {
  return {hp};
}
inline OperatorKernelBlocks with_hp(const OperatorKernelBlocks& k,
                                    const Hyperparameters& hp) {
  return {{hp}, k.op};
}
inline SpectralKernel with_hp(const SpectralKernel& k,
                              const Hyperparameters& hp) {
  return {k.basis, hp};
}

}  // namespace bvpgp
