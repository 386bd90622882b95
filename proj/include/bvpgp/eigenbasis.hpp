#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "bvpgp/domain.hpp"
#include "bvpgp/errors.hpp"

namespace bvpgp {

// One eigenpair of the boundary value operator. The multi-index is (n, 0)
// for the 1D families and (m, n) for the 2D tensor-product family.
struct EigenPair {
  double lambda = 0.0;
  std::array<int, 2> index{0, 0};
};

// Closed-form orthonormal eigenfunctions of the shipped boundary value
// problems on the unit box, with exact gradient evaluators. Pairs are sorted
// by nondecreasing eigenvalue, ties broken by lexicographic multi-index.
class EigenBasis {
 public:
  enum class Family { dirichlet_sine_1d, neumann_cosine_1d, mixed_cosine_2d };

  Family family() const { return family_; }
  int dim() const { return domain_.dim; }
  Index size() const { return static_cast<Index>(pairs_.size()); }
  const std::vector<EigenPair>& pairs() const { return pairs_; }
  double lambda(Index j) const { return pairs_[static_cast<std::size_t>(j)].lambda; }
  const Domain& domain() const { return domain_; }
  const BoundaryConditionSpec& bcs() const { return bcs_; }
  const OperatorSpec& op() const { return op_; }
  // M for the 1D families, M1 (eigenfunctions per dimension) for the 2D one.
  int order() const { return order_; }

  double eval(Index j, double x) const {
    const auto& p = pairs_[static_cast<std::size_t>(j)];
    const double root = p.index[0] * std::numbers::pi;
    switch (family_) {
      case Family::dirichlet_sine_1d:
        return std::numbers::sqrt2 * std::sin(root * x);
      case Family::neumann_cosine_1d:
        return std::numbers::sqrt2 * std::cos(root * x);
      default:
        throw DimMismatch("2D basis evaluated at a 1D point");
    }
  }

  double eval(Index j, double x, double y) const {
    if (family_ != Family::mixed_cosine_2d)
      throw DimMismatch("1D basis evaluated at a 2D point");
    const auto& p = pairs_[static_cast<std::size_t>(j)];
    return 2.0 * std::cos(axis_freq(p.index[0]) * x) *
           std::cos(axis_freq(p.index[1]) * y);
  }

  double eval_point(Index j, const Eigen::Ref<const Vector>& x) const {
    if (x.size() != dim())
      throw DimMismatch("point dimension does not match basis dimension");
    return dim() == 1 ? eval(j, x[0]) : eval(j, x[0], x[1]);
  }

  // Closed-form gradient of phi_j.
  Vector gradient(Index j, const Eigen::Ref<const Vector>& x) const {
    if (x.size() != dim())
      throw DimMismatch("point dimension does not match basis dimension");
    const auto& p = pairs_[static_cast<std::size_t>(j)];
    Vector g(dim());
    if (family_ == Family::dirichlet_sine_1d) {
      const double root = p.index[0] * std::numbers::pi;
      g[0] = std::numbers::sqrt2 * root * std::cos(root * x[0]);
    } else if (family_ == Family::neumann_cosine_1d) {
      const double root = p.index[0] * std::numbers::pi;
      g[0] = -std::numbers::sqrt2 * root * std::sin(root * x[0]);
    } else {
      const double mu = axis_freq(p.index[0]);
      const double nu = axis_freq(p.index[1]);
      g[0] = -2.0 * mu * std::sin(mu * x[0]) * std::cos(nu * x[1]);
      g[1] = -2.0 * nu * std::cos(mu * x[0]) * std::sin(nu * x[1]);
    }
    return g;
  }

  static EigenBasis laplacian_1d_dirichlet(int M) {
    EigenBasis b;
    b.family_ = Family::dirichlet_sine_1d;
    b.init_1d(M, BoundaryConditionSpec::all_dirichlet(1));
    return b;
  }

  static EigenBasis laplacian_1d_neumann(int M) {
    // Constant zero mode excluded; the spectrum starts at pi^2 like the
    // Dirichlet family.
    EigenBasis b;
    b.family_ = Family::neumann_cosine_1d;
    b.init_1d(M, BoundaryConditionSpec::all_neumann(1));
    return b;
  }

  static EigenBasis helmholtz_2d_mixed(int M1, double k) {
    if (M1 < 1) throw InvalidOrder("basis order must be >= 1");
    EigenBasis b;
    b.family_ = Family::mixed_cosine_2d;
    b.order_ = M1;
    b.domain_ = Domain::unit_square();
    b.bcs_ = BoundaryConditionSpec::neumann_low_dirichlet_high(2);
    b.op_ = k == 0.0 ? OperatorSpec::negative_laplacian()
                     : OperatorSpec::helmholtz(k);
    const double c = b.op_.shift();
    for (int m = 0; m < M1; ++m) {
      for (int n = 0; n < M1; ++n) {
        const double mu = axis_freq(m);
        const double nu = axis_freq(n);
        b.pairs_.push_back({mu * mu + nu * nu + c, {m, n}});
      }
    }
    std::stable_sort(b.pairs_.begin(), b.pairs_.end(),
                     [](const EigenPair& a, const EigenPair& bb) {
                       if (a.lambda != bb.lambda) return a.lambda < bb.lambda;
                       return a.index < bb.index;
                     });
    return b;
  }

 private:
  // mu_m = (2m+1) pi / 2: cosine frequencies with du/dn = 0 at 0 and u = 0
  // at 1.
  static double axis_freq(int m) {
    return (2 * m + 1) * std::numbers::pi / 2.0;
  }

  void init_1d(int M, BoundaryConditionSpec bcs) {
    if (M < 1) throw InvalidOrder("basis order must be >= 1");
    order_ = M;
    domain_ = Domain::unit_interval();
    bcs_ = std::move(bcs);
    op_ = OperatorSpec::negative_laplacian();
    for (int n = 1; n <= M; ++n) {
      const double root = n * std::numbers::pi;
      pairs_.push_back({root * root, {n, 0}});
    }
  }

  Family family_ = Family::dirichlet_sine_1d;
  std::vector<EigenPair> pairs_;
  Domain domain_ = Domain::unit_interval();
  BoundaryConditionSpec bcs_ = BoundaryConditionSpec::all_dirichlet(1);
  OperatorSpec op_;
  int order_ = 0;
};

inline EigenBasis laplacian_1d_dirichlet_basis(int M) {
  return EigenBasis::laplacian_1d_dirichlet(M);
}

inline EigenBasis laplacian_1d_neumann_basis(int M) {
  return EigenBasis::laplacian_1d_neumann(M);
}

inline EigenBasis helmholtz_2d_mixed_basis(int M1, double k) {
  return EigenBasis::helmholtz_2d_mixed(M1, k);
}

// [Phi]_{i,j} = phi_j(x_i), or lambda_j phi_j(x_i) when scale_by_lambda
// (the rows used for source observations). Column order follows basis.pairs.
inline Matrix basis_matrix(const EigenBasis& basis, const Matrix& points,
                           bool scale_by_lambda) {
  if (points.cols() != basis.dim())
    throw DimMismatch("points dimension does not match basis dimension");
  const Index n = points.rows();
  const Index m = basis.size();
  Matrix phi(n, m);
  for (Index i = 0; i < n; ++i) {
    Vector x = points.row(i);
    if (!basis.domain().contains(x)) throw PointOutsideDomain(i);
    if (basis.dim() == 1) {
      for (Index j = 0; j < m; ++j) phi(i, j) = basis.eval(j, x[0]);
    } else {
      for (Index j = 0; j < m; ++j) phi(i, j) = basis.eval(j, x[0], x[1]);
    }
  }
  if (scale_by_lambda) {
    for (Index j = 0; j < m; ++j) phi.col(j) *= basis.lambda(j);
  }
  return phi;
}

// Spectral power density of the squared-exponential kernel:
// S(w) = s^2 (2 pi ell^2)^{d/2} exp(-ell^2 w^2 / 2).
inline double spectral_density_se(const Hyperparameters& hp, int dim,
                                  double omega) {
  const double two_pi_ell2 = 2.0 * std::numbers::pi * hp.ell * hp.ell;
  return hp.s2 * std::pow(two_pi_ell2, 0.5 * dim) *
         std::exp(-0.5 * hp.ell * hp.ell * omega * omega);
}

inline const char* to_string(EigenBasis::Family f) {
  switch (f) {
    case EigenBasis::Family::dirichlet_sine_1d: return "dirichlet_sine_1d";
    case EigenBasis::Family::neumann_cosine_1d: return "neumann_cosine_1d";
    default: return "mixed_cosine_2d";
  }
}

}  // namespace bvpgp
