#pragma once

#include "mgmc/bayes.hpp"
#include "mgmc/samplers.hpp"

#include <vector>

namespace mgmc {

/// Dense splitting matrices of the low-rank Gibbs smoothers on a posterior
/// precision Ã = A + B Gamma^{-1} B^T:
///   forward   M = Ã - A + D/omega + L
///   backward  M = Ã - A + D/omega + L^T
DenseMatrix splitting_matrix(const DenseMatrix &a_tilde, const DenseMatrix &a_prior,
                             double omega, Direction direction);

/// M (M + M^T - A)^{-1} M^T
DenseMatrix symmetrised_splitting(const DenseMatrix &m, const DenseMatrix &a);

/// Per-level dense iteration data. t and q are empty on level 0.
struct LevelIteration {
  DenseMatrix a;     ///< Ã_l
  DenseMatrix a_inv; ///< Ã_l^{-1}
  DenseMatrix s_pre, s_post;
  DenseMatrix t, q;
  DenseMatrix x, y, k;
};

struct IterationBundle {
  std::vector<LevelIteration> levels;
  const LevelIteration &finest() const { return levels.back(); }
};

/// X_0 = (S_bwd S_fwd)^{nu0}, or 0 for an exact coarse sampler, and for l >= 1
///   T_l = I - P Ã_{l-1}^{-1} P^T Ã_l
///   Q_l = T_l + P X_{l-1}^{gamma_l} Ã_{l-1}^{-1} P^T Ã_l
///   X_l = S_post^{nu2} Q_l S_pre^{nu1}
///   Y_l = (I - X_l) Ã_l^{-1},   K_l = Ã_l^{-1} - X_l Ã_l^{-1} X_l^T
IterationBundle build_iteration_bundle(const PosteriorProblem &problem,
                                       const CycleParams &params);

/// ||A^{1/2} X A^{-1/2}||_2
double energy_norm_of(const DenseMatrix &x, const DenseMatrix &a);

/// lambda_min(M - A). Throws InvalidArgument when M is not symmetric.
double check_smoothing_property(const DenseMatrix &m, const DenseMatrix &a);

/// ||M^{1/2}(A_fine^{-1} - P A_coarse^{-1} P^T) M^{1/2}||_2
double approximation_constant(const DenseMatrix &m, const DenseMatrix &a_fine,
                              const DenseMatrix &p, const DenseMatrix &a_coarse);

/// Approximation constant with the symmetrised Gibbs splitting for each level
/// l = 1..L (entry l-1). Empty for a single-level hierarchy.
std::vector<double> check_approximation_property(const PosteriorProblem &problem,
                                                 double omega = 1.0);

/// tau = -1 + 2 F^T (I - X)^{-1} A^{-1} F / F^T A^{-1} F. Falls back to summing
/// the series when I - X is ill-conditioned; throws NumericalError if the
/// spectral radius of X is not below one.
double exact_iact(const DenseMatrix &x, const DenseMatrix &a, const Vector &f);

/// (1 + ||X||_A) / (1 - ||X||_A); infinite when ||X||_A >= 1.
double iact_bound(const DenseMatrix &x, const DenseMatrix &a);

struct Moments {
  Vector mean;
  DenseMatrix cov;
};

/// m steps of mean -> X mean + Y f and cov -> X cov X^T + K.
Moments moment_recursions(const DenseMatrix &x, const DenseMatrix &y, const DenseMatrix &k,
                          const Vector &f, const Vector &mean0, const DenseMatrix &cov0,
                          int steps);

/// Cov(theta^{m+s}, theta^m) = X^s Cov(theta^m)
DenseMatrix cross_covariance(const DenseMatrix &x, const DenseMatrix &cov, int lag);

} // namespace mgmc
