#include "mgmc/dense.hpp"

#include "mgmc/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdlib>
#include <string>

namespace mgmc {

Index oracle_cap() {
  if (const char *env = std::getenv("MGMC_ORACLE_CAP")) {
    char *end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0)
      return static_cast<Index>(v);
  }
  return 4096;
}

void require_oracle_size(Index n, const char *what) {
  if (n > oracle_cap())
    throw SizeCapExceeded(std::string(what) + ": dimension " +
                          std::to_string(n) + " exceeds oracle cap " +
                          std::to_string(oracle_cap()));
}

DenseMatrix densify(const SparseMatrix &a) {
  require_oracle_size(std::max(a.rows(), a.cols()), "densify");
  return a.to_dense();
}

double spectral_norm(const DenseMatrix &a, double tol, int max_iterations) {
  if (a.rows() == 0 || a.cols() == 0)
    return 0.0;
  // deterministic start with all components excited
  Vector v(a.cols());
  for (Index i = 0; i < v.size(); ++i)
    v[i] = 1.0 + 0.5 * std::sin(1.0 + 3.0 * static_cast<double>(i));
  v.normalize();

  double estimate = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    const Vector w = a * v;
    Vector u = a.transpose() * w;
    const double lambda = v.dot(u); // Rayleigh quotient of A^T A
    const double norm_u = u.norm();
    if (norm_u == 0.0)
      return 0.0;
    const double next = std::sqrt(std::max(lambda, 0.0));
    if (it > 0 && std::abs(next - estimate) <= tol * next)
      return next;
    estimate = next;
    v = u / norm_u;
  }
  throw NumericalError("spectral_norm: power iteration did not converge");
}

namespace {

Eigen::SelfAdjointEigenSolver<DenseMatrix> spd_eigen(const DenseMatrix &a) {
  if (a.rows() != a.cols())
    throw DimensionMismatch("square matrix required");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(a);
  if (es.info() != Eigen::Success)
    throw NumericalError("symmetric eigensolver failed");
  if (a.rows() > 0 && es.eigenvalues().minCoeff() <= 0.0)
    throw NotSpd("matrix has a non-positive eigenvalue");
  return es;
}

} // namespace

DenseMatrix dense_sqrt_spd(const DenseMatrix &a) {
  const auto es = spd_eigen(a);
  const DenseMatrix &q = es.eigenvectors();
  DenseMatrix s = q * es.eigenvalues().cwiseSqrt().asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

DenseMatrix dense_inv_sqrt_spd(const DenseMatrix &a) {
  const auto es = spd_eigen(a);
  const DenseMatrix &q = es.eigenvectors();
  DenseMatrix s =
      q * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

DenseMatrix dense_cholesky_lower(const DenseMatrix &a) {
  Eigen::LLT<DenseMatrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw NotSpd("dense Cholesky: matrix is not positive definite");
  return llt.matrixL();
}

DenseMatrix spd_inverse(const DenseMatrix &a) {
  Eigen::LLT<DenseMatrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw NotSpd("dense Cholesky: matrix is not positive definite");
  DenseMatrix inv = llt.solve(DenseMatrix::Identity(a.rows(), a.cols()));
  return 0.5 * (inv + inv.transpose());
}

double min_eigenvalue_symmetric(const DenseMatrix &a) {
  if (a.rows() == 0)
    return 0.0;
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double spectral_radius(const DenseMatrix &a) {
  if (a.rows() == 0)
    return 0.0;
  Eigen::EigenSolver<DenseMatrix> es(a, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

} // namespace mgmc
