#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace mgmc {

using Index = std::int64_t;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

struct Triplet {
  Index row;
  Index col;
  double value;
};

enum class Triangle { lower, upper };

/// Compressed sparse row matrix.
///
/// Entries of each row are stored in ascending column order, without
/// duplicates and without explicit zeros. Row order is the traversal order
/// of every Gauss-Seidel style sweep in the library, so it is part of the
/// contract rather than an implementation detail.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols);

  /// Duplicate (row, col) pairs are summed in insertion order; entries that
  /// sum to exactly zero are dropped.
  static SparseMatrix from_triplets(Index rows, Index cols,
                                    std::span<const Triplet> triplets);
  static SparseMatrix identity(Index n);
  static SparseMatrix diagonal(const Vector &d);
  static SparseMatrix from_dense(const DenseMatrix &m);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nnz() const { return static_cast<Index>(values_.size()); }

  std::span<const Index> row_ptr() const { return row_ptr_; }
  std::span<const Index> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  std::span<const Index> row_cols(Index i) const {
    return {col_idx_.data() + row_ptr_[i],
            static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
  }
  std::span<const double> row_values(Index i) const {
    return {values_.data() + row_ptr_[i],
            static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
  }

  double coeff(Index i, Index j) const;
  Vector diagonal() const;
  bool has_full_nonzero_diagonal() const;

  SparseMatrix transpose() const;
  /// Lower (or upper) triangle; the diagonal is kept when include_diagonal.
  SparseMatrix triangle(Triangle part, bool include_diagonal) const;
  SparseMatrix scaled(double alpha) const;

  /// Largest |a(i,j) - a(j,i)|; zero for exactly symmetric matrices.
  double max_asymmetry() const;
  bool is_symmetric() const { return rows_ == cols_ && max_asymmetry() == 0.0; }
  /// Replaces the strict lower triangle by the mirror of the strict upper one.
  SparseMatrix mirrored_from_upper() const;

  /// y = A x
  void multiply(const Vector &x, Vector &y) const;
  /// y += alpha * A x
  void multiply_add(const Vector &x, Vector &y, double alpha = 1.0) const;
  /// y = A^T x
  void transpose_multiply(const Vector &x, Vector &y) const;

  DenseMatrix to_dense() const;

  double frobenius_norm() const;

  /// MatrixMarket coordinate/real/general dump (1-based indices).
  void write_matrix_market(std::ostream &os) const;

private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

Vector spmv(const SparseMatrix &a, const Vector &x);

/// C = A * B
SparseMatrix multiply(const SparseMatrix &a, const SparseMatrix &b);
/// alpha * A + beta * B
SparseMatrix add(const SparseMatrix &a, const SparseMatrix &b,
                 double alpha = 1.0, double beta = 1.0);

/// Solves M x = b for triangular M; only the named triangle of M is read.
Vector tri_solve(const SparseMatrix &m, const Vector &b, Triangle part);
/// Solves M^T x = b using the rows of M (no explicit transpose).
Vector tri_solve_transposed(const SparseMatrix &m, const Vector &b,
                            Triangle part);

/// Frobenius norm of A - B over the union of both patterns.
double frobenius_distance(const SparseMatrix &a, const SparseMatrix &b);

} // namespace mgmc
