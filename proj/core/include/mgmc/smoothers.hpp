#pragma once

#include "mgmc/bayes.hpp"
#include "mgmc/cholesky.hpp"
#include "mgmc/rng.hpp"

#include <Eigen/LU>

namespace mgmc {

/// Generic random splitting smoother theta' = theta + M^{-1}(f + xi - A theta)
/// with xi ~ N(0, M + M^T - A). Dense, so limited to the oracle cap.
class RandomSmoother {
public:
  /// Throws InvalidSplitting if M + M^T - A is not positive definite.
  RandomSmoother(const SparseMatrix &a, const SparseMatrix &m);

  void step(const Vector &f, Vector &theta, RngStream &rng) const;

  const DenseMatrix &noise_factor() const { return noise_lower_; }

private:
  DenseMatrix a_;
  Eigen::PartialPivLU<DenseMatrix> m_lu_;
  DenseMatrix noise_lower_;
};

/// One step of RandomSmoother built on the fly.
Vector random_smoother_step(const SparseMatrix &a, const SparseMatrix &m, const Vector &f,
                            const Vector &theta, RngStream &rng);

struct SweepWorkspace {
  Vector noise;      // n
  Vector low_rank;   // beta
  Vector projection; // beta

  void resize(Index n, Index beta);
};

/// Gibbs/SOR sweep with low-rank correction on level l:
///   theta* = theta + M^{-1}(f + xi - A_l theta)
///   theta' = theta* - B* (B_l^T theta*)
/// xi = sqrt((2-omega)/omega) xi_diag + B_l xi_lr, xi_diag ~ N(0, D_l),
/// xi_lr ~ N(0, Gamma^{-1}). The n diagonal draws are taken first, then the
/// beta low-rank draws. The forward sweep visits rows in ascending order, the
/// backward sweep in descending order.
void gibbs_lowrank_step(const PosteriorProblem &problem, int l,
                        const LowRankPrecompute &pre, const Vector &f, Vector &theta,
                        RngStream &rng, SweepWorkspace &ws);

/// Forward then backward sweep.
void symmetric_gibbs_step(const PosteriorProblem &problem, int l,
                          const LowRankPrecompute &forward,
                          const LowRankPrecompute &backward, const Vector &f,
                          Vector &theta, RngStream &rng, SweepWorkspace &ws);

/// Exact draw from N(Ã^{-1} f, Ã^{-1}) given a factor of Ã:
/// solve U^T g = P f, then U P theta = xi + g.
void cholesky_draw(const TriangularFactor &factor, const Vector &f, Vector &theta,
                   RngStream &rng, Vector &scratch);
/// Same draw with g = U^{-T} P f already computed.
void cholesky_draw_shifted(const TriangularFactor &factor, const Vector &g, Vector &theta,
                           RngStream &rng, Vector &scratch);

} // namespace mgmc
