#include "mgmc/oracle.hpp"

#include "mgmc/dense.hpp"
#include "mgmc/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cmath>
#include <limits>

namespace mgmc {

namespace {

DenseMatrix matrix_power(const DenseMatrix &x, int p) {
  DenseMatrix out = DenseMatrix::Identity(x.rows(), x.cols());
  for (int i = 0; i < p; ++i)
    out = x * out;
  return out;
}

} // namespace

DenseMatrix splitting_matrix(const DenseMatrix &a_tilde, const DenseMatrix &a_prior,
                             double omega, Direction direction) {
  if (a_tilde.rows() != a_prior.rows() || a_tilde.cols() != a_prior.cols())
    throw DimensionMismatch("splitting_matrix: sizes differ");
  DenseMatrix m = a_tilde - a_prior;
  if (direction == Direction::forward)
    m += a_prior.triangularView<Eigen::StrictlyLower>().toDenseMatrix();
  else
    m += a_prior.triangularView<Eigen::StrictlyUpper>().toDenseMatrix();
  m.diagonal() += a_prior.diagonal() / omega;
  return m;
}

DenseMatrix symmetrised_splitting(const DenseMatrix &m, const DenseMatrix &a) {
  const DenseMatrix middle = m + m.transpose() - a;
  Eigen::PartialPivLU<DenseMatrix> lu(middle);
  DenseMatrix out = m * lu.solve(DenseMatrix(m.transpose()));
  return 0.5 * (out + out.transpose());
}

IterationBundle build_iteration_bundle(const PosteriorProblem &problem,
                                       const CycleParams &params) {
  params.validate();
  const int finest = problem.finest();
  require_oracle_size(problem.size(finest), "iteration bundle");
  IterationBundle bundle;
  bundle.levels.resize(static_cast<std::size_t>(finest + 1));

  for (int l = 0; l <= finest; ++l) {
    LevelIteration &it = bundle.levels[static_cast<std::size_t>(l)];
    const Index n = problem.size(l);
    const DenseMatrix id = DenseMatrix::Identity(n, n);
    it.a = problem.dense_precision(l);
    it.a_inv = spd_inverse(it.a);
    const DenseMatrix a_prior = problem.level(l).precision.to_dense();
    const DenseMatrix m_fwd = splitting_matrix(it.a, a_prior, params.omega, Direction::forward);
    const DenseMatrix m_bwd = splitting_matrix(it.a, a_prior, params.omega, Direction::backward);
    it.s_pre = id - m_fwd.partialPivLu().solve(it.a);
    it.s_post = id - m_bwd.partialPivLu().solve(it.a);

    if (l == 0) {
      if (params.coarse == CoarseMode::cholesky)
        it.x = DenseMatrix::Zero(n, n);
      else
        it.x = matrix_power(it.s_post * it.s_pre, params.nu0);
    } else {
      const LevelIteration &c = bundle.levels[static_cast<std::size_t>(l - 1)];
      const DenseMatrix p = problem.level(l).prolongation.to_dense();
      const DenseMatrix coarse_correction = c.a_inv * p.transpose() * it.a;
      it.t = id - p * coarse_correction;
      it.q = it.t + p * matrix_power(c.x, params.gamma(l, finest)) * coarse_correction;
      it.x = matrix_power(it.s_post, params.nu2) * it.q * matrix_power(it.s_pre, params.nu1);
    }
    it.y = (id - it.x) * it.a_inv;
    it.k = it.a_inv - it.x * it.a_inv * it.x.transpose();
  }
  return bundle;
}

double energy_norm_of(const DenseMatrix &x, const DenseMatrix &a) {
  if (x.rows() != a.rows() || x.cols() != a.cols())
    throw DimensionMismatch("energy norm: sizes differ");
  if (x.size() == 0)
    return 0.0;
  return spectral_norm(dense_sqrt_spd(a) * x * dense_inv_sqrt_spd(a));
}

double check_smoothing_property(const DenseMatrix &m, const DenseMatrix &a) {
  if (m.rows() != a.rows() || m.cols() != a.cols() || m.rows() != m.cols())
    throw DimensionMismatch("smoothing property: sizes differ");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw InvalidArgument("smoothing property is defined for symmetric splittings only");
  const DenseMatrix diff = m - a;
  return min_eigenvalue_symmetric(0.5 * (diff + diff.transpose()));
}

double approximation_constant(const DenseMatrix &m, const DenseMatrix &a_fine,
                              const DenseMatrix &p, const DenseMatrix &a_coarse) {
  const DenseMatrix s = dense_sqrt_spd(0.5 * (m + m.transpose()));
  const DenseMatrix diff = spd_inverse(a_fine) - p * spd_inverse(a_coarse) * p.transpose();
  return spectral_norm(s * diff * s);
}

std::vector<double> check_approximation_property(const PosteriorProblem &problem,
                                                 double omega) {
  std::vector<double> out;
  for (int l = 1; l <= problem.finest(); ++l) {
    require_oracle_size(problem.size(l), "approximation property");
    const DenseMatrix a = problem.dense_precision(l);
    const DenseMatrix m = splitting_matrix(a, problem.level(l).precision.to_dense(), omega,
                                           Direction::forward);
    out.push_back(approximation_constant(symmetrised_splitting(m, a), a,
                                         problem.level(l).prolongation.to_dense(),
                                         problem.dense_precision(l - 1)));
  }
  return out;
}

double exact_iact(const DenseMatrix &x, const DenseMatrix &a, const Vector &f) {
  if (x.rows() != a.rows() || f.size() != a.rows())
    throw DimensionMismatch("exact_iact: sizes differ");
  if (spectral_radius(x) >= 1.0)
    throw NumericalError("exact_iact: spectral radius of X is not below one");
  const Vector ainv_f = a.llt().solve(f);
  const double denom = f.dot(ainv_f);
  if (!(denom > 0.0))
    throw InvalidArgument("exact_iact: F^T A^{-1} F must be positive");
  const DenseMatrix id = DenseMatrix::Identity(x.rows(), x.cols());
  Eigen::FullPivLU<DenseMatrix> lu(id - x);
  if (lu.rcond() > 1e-12)
    return -1.0 + 2.0 * f.dot(lu.solve(ainv_f)) / denom;

  // sum_{s>=1} F^T X^s A^{-1} F term by term
  double sum = 0.0;
  Vector v = ainv_f;
  for (int s = 1; s < 100000000; ++s) {
    v = x * v;
    const double term = f.dot(v) / denom;
    sum += term;
    if (std::abs(term) < 1e-12 && v.norm() < 1e-12 * ainv_f.norm())
      return 1.0 + 2.0 * sum;
  }
  throw NumericalError("exact_iact: series did not converge");
}

double iact_bound(const DenseMatrix &x, const DenseMatrix &a) {
  const double norm = energy_norm_of(x, a);
  if (norm >= 1.0)
    return std::numeric_limits<double>::infinity();
  return (1.0 + norm) / (1.0 - norm);
}

Moments moment_recursions(const DenseMatrix &x, const DenseMatrix &y, const DenseMatrix &k,
                          const Vector &f, const Vector &mean0, const DenseMatrix &cov0,
                          int steps) {
  if (steps < 0)
    throw InvalidArgument("moment_recursions: negative step count");
  Moments m{mean0, cov0};
  const Vector shift = y * f;
  for (int s = 0; s < steps; ++s) {
    m.mean = x * m.mean + shift;
    m.cov = x * m.cov * x.transpose() + k;
  }
  return m;
}

DenseMatrix cross_covariance(const DenseMatrix &x, const DenseMatrix &cov, int lag) {
  if (lag < 0)
    throw InvalidArgument("cross_covariance: negative lag");
  return matrix_power(x, lag) * cov;
}

} // namespace mgmc
