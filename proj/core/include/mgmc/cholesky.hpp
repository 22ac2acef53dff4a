#pragma once

#include "mgmc/sparse.hpp"

#include <vector>

namespace mgmc {

enum class Ordering { natural, fill_reducing };

/// Upper factor U and permutation P with A = P^T U^T U P.
///
/// The permutation is stored as an index map: (P x)[i] = x[permutation[i]].
struct TriangularFactor {
  Triangle orientation = Triangle::upper;
  SparseMatrix matrix;
  std::vector<Index> permutation;

  Index size() const { return matrix.rows(); }

  Vector permute(const Vector &x) const;         // P x
  Vector permute_inverse(const Vector &x) const; // P^T x

  /// Solves A x = b.
  Vector solve(const Vector &b) const;
  /// Solves U P x = rhs, i.e. x = P^T U^{-1} rhs.
  Vector solve_upper_permuted(const Vector &rhs) const;
  /// g with U^T g = P f.
  Vector forward_rhs(const Vector &f) const;

  /// P^T U^T U P as a sparse matrix (for round-trip checks).
  SparseMatrix reconstruct() const;
};

/// Sparse Cholesky factorisation of a symmetric positive definite matrix.
/// Throws NotSpd on a non-positive pivot.
TriangularFactor sparse_cholesky(const SparseMatrix &a,
                                 Ordering ordering = Ordering::fill_reducing);

} // namespace mgmc
