#include "mgmc/smoothers.hpp"

#include "mgmc/dense.hpp"
#include "mgmc/errors.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace mgmc {

RandomSmoother::RandomSmoother(const SparseMatrix &a, const SparseMatrix &m) {
  if (a.rows() != a.cols() || m.rows() != a.rows() || m.cols() != a.cols())
    throw DimensionMismatch("random smoother: A and M must be square of equal size");
  require_oracle_size(a.rows(), "random smoother");
  a_ = a.to_dense();
  const DenseMatrix md = m.to_dense();
  m_lu_.compute(md);
  if (a.rows() > 0 && m_lu_.determinant() == 0.0)
    throw SingularSplitting("random smoother: M is singular");
  const DenseMatrix cov = md + md.transpose() - a_;
  Eigen::LLT<DenseMatrix> llt(cov);
  if (llt.info() != Eigen::Success)
    throw InvalidSplitting("M + M^T - A is not positive definite");
  noise_lower_ = llt.matrixL();
}

void RandomSmoother::step(const Vector &f, Vector &theta, RngStream &rng) const {
  if (f.size() != a_.rows() || theta.size() != a_.rows())
    throw DimensionMismatch("random smoother: vector length");
  Vector z(a_.rows());
  rng.fill_normal(z);
  const Vector rhs = f + noise_lower_ * z - a_ * theta;
  theta += m_lu_.solve(rhs);
}

Vector random_smoother_step(const SparseMatrix &a, const SparseMatrix &m, const Vector &f,
                            const Vector &theta, RngStream &rng) {
  RandomSmoother s(a, m);
  Vector out = theta;
  s.step(f, out, rng);
  return out;
}

void SweepWorkspace::resize(Index n, Index beta) {
  noise.resize(n);
  low_rank.resize(beta);
  projection.resize(beta);
}

void gibbs_lowrank_step(const PosteriorProblem &problem, int l, const LowRankPrecompute &pre,
                        const Vector &f, Vector &theta, RngStream &rng, SweepWorkspace &ws) {
  const Level &lv = problem.level(l);
  const SparseMatrix &a = lv.precision;
  const Index n = a.rows();
  const Index beta = problem.beta();
  if (f.size() != n || theta.size() != n)
    throw DimensionMismatch("gibbs step: vector length does not match level");
  if (pre.triangular.rows() != n || pre.bstar.rows() != n || pre.bstar.cols() != beta)
    throw StateError("gibbs step: low-rank precompute does not belong to this level");
  ws.resize(n, beta);

  const double omega = pre.omega;
  const Vector &diag = pre.diagonal;
  rng.fill_normal(ws.noise);
  const auto rows = a.row_ptr();
  const auto cols = a.col_idx();
  const auto vals = a.values();
  for (Index i = 0; i < n; ++i)
    ws.noise[i] = f[i] + pre.noise_scale[i] * ws.noise[i];
  if (beta > 0) {
    problem.noise().sample_inverse(ws.low_rank, rng);
    lv.observation.multiply_add(ws.low_rank, ws.noise);
  }

  auto relax = [&](Index i) {
    double s = ws.noise[i];
    for (Index p = rows[i]; p < rows[i + 1]; ++p)
      if (cols[p] != i)
        s -= vals[p] * theta[cols[p]];
    theta[i] = (1.0 - omega) * theta[i] + omega * s / diag[i];
  };
  if (pre.direction == Direction::forward)
    for (Index i = 0; i < n; ++i)
      relax(i);
  else
    for (Index i = n - 1; i >= 0; --i)
      relax(i);

  if (beta > 0) {
    lv.observation.transpose_multiply(theta, ws.projection);
    theta.noalias() -= pre.bstar * ws.projection;
  }
}

void symmetric_gibbs_step(const PosteriorProblem &problem, int l,
                          const LowRankPrecompute &forward, const LowRankPrecompute &backward,
                          const Vector &f, Vector &theta, RngStream &rng, SweepWorkspace &ws) {
  gibbs_lowrank_step(problem, l, forward, f, theta, rng, ws);
  gibbs_lowrank_step(problem, l, backward, f, theta, rng, ws);
}

void cholesky_draw(const TriangularFactor &factor, const Vector &f, Vector &theta,
                   RngStream &rng, Vector &scratch) {
  if (f.size() != factor.size())
    throw DimensionMismatch("cholesky draw: right-hand side length");
  cholesky_draw_shifted(factor, factor.forward_rhs(f), theta, rng, scratch);
}

void cholesky_draw_shifted(const TriangularFactor &factor, const Vector &g, Vector &theta,
                           RngStream &rng, Vector &scratch) {
  scratch.resize(factor.size());
  rng.fill_normal(scratch);
  scratch += g;
  theta = factor.solve_upper_permuted(scratch);
}

} // namespace mgmc
