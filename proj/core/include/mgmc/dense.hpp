#pragma once

#include "mgmc/sparse.hpp"

namespace mgmc {

/// Largest dimension accepted by dense oracle routines. Defaults to 4096 and
/// can be overridden with the MGMC_ORACLE_CAP environment variable.
Index oracle_cap();
/// Throws SizeCapExceeded if n is above oracle_cap().
void require_oracle_size(Index n, const char *what);

/// Dense copy of a sparse matrix, subject to the oracle cap.
DenseMatrix densify(const SparseMatrix &a);

/// Largest singular value by power iteration on A^T A.
double spectral_norm(const DenseMatrix &a, double tol = 1e-10,
                     int max_iterations = 200000);

/// Symmetric square root S of an SPD matrix with S S = A.
DenseMatrix dense_sqrt_spd(const DenseMatrix &a);
/// Symmetric inverse square root A^{-1/2}.
DenseMatrix dense_inv_sqrt_spd(const DenseMatrix &a);

/// Inverse of an SPD matrix via dense Cholesky; throws NotSpd.
DenseMatrix spd_inverse(const DenseMatrix &a);
/// Lower Cholesky factor; throws NotSpd.
DenseMatrix dense_cholesky_lower(const DenseMatrix &a);

double min_eigenvalue_symmetric(const DenseMatrix &a);
double spectral_radius(const DenseMatrix &a);

} // namespace mgmc
