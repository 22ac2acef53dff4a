#include "mgmc/sparse.hpp"

#include "mgmc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

namespace mgmc {

namespace {

void require(bool ok, const char *what) {
  if (!ok)
    throw DimensionMismatch(what);
}

} // namespace

SparseMatrix::SparseMatrix(Index rows, Index cols)
    : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {
  if (rows < 0 || cols < 0)
    throw InvalidArgument("negative matrix dimension");
}

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols,
                                         std::span<const Triplet> triplets) {
  SparseMatrix m(rows, cols);
  std::vector<std::size_t> order(triplets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (const auto &t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw DimensionMismatch("triplet index out of range");
  }
  // stable so that duplicates are summed in insertion order
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto &ta = triplets[a];
    const auto &tb = triplets[b];
    return ta.row != tb.row ? ta.row < tb.row : ta.col < tb.col;
  });

  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  std::size_t k = 0;
  for (Index i = 0; i < rows; ++i) {
    while (k < order.size() && triplets[order[k]].row == i) {
      const Index j = triplets[order[k]].col;
      double sum = 0.0;
      while (k < order.size() && triplets[order[k]].row == i &&
             triplets[order[k]].col == j) {
        sum += triplets[order[k]].value;
        ++k;
      }
      if (sum != 0.0) {
        m.col_idx_.push_back(j);
        m.values_.push_back(sum);
      }
    }
    m.row_ptr_[i + 1] = static_cast<Index>(m.col_idx_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::identity(Index n) {
  return diagonal(Vector::Ones(n));
}

SparseMatrix SparseMatrix::diagonal(const Vector &d) {
  std::vector<Triplet> t;
  t.reserve(d.size());
  for (Index i = 0; i < d.size(); ++i)
    t.push_back({i, i, d[i]});
  return from_triplets(d.size(), d.size(), t);
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix &m) {
  std::vector<Triplet> t;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0)
        t.push_back({i, j, m(i, j)});
  return from_triplets(m.rows(), m.cols(), t);
}

double SparseMatrix::coeff(Index i, Index j) const {
  const auto cols = row_cols(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j)
    return 0.0;
  return values_[row_ptr_[i] + (it - cols.begin())];
}

Vector SparseMatrix::diagonal() const {
  const Index n = std::min(rows_, cols_);
  Vector d = Vector::Zero(n);
  for (Index i = 0; i < n; ++i)
    d[i] = coeff(i, i);
  return d;
}

bool SparseMatrix::has_full_nonzero_diagonal() const {
  if (rows_ != cols_)
    return false;
  for (Index i = 0; i < rows_; ++i)
    if (coeff(i, i) == 0.0)
      return false;
  return true;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  std::vector<Index> count(static_cast<std::size_t>(cols_) + 1, 0);
  for (Index k = 0; k < nnz(); ++k)
    ++count[col_idx_[k] + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());
  t.row_ptr_ = count;
  t.col_idx_.resize(col_idx_.size());
  t.values_.resize(values_.size());
  std::vector<Index> next(count.begin(), count.end() - 1);
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const Index dst = next[col_idx_[k]]++;
      t.col_idx_[dst] = i;
      t.values_[dst] = values_[k];
    }
  }
  return t;
}

SparseMatrix SparseMatrix::triangle(Triangle part, bool include_diagonal) const {
  SparseMatrix t(rows_, cols_);
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const Index j = col_idx_[k];
      const bool keep = (j == i) ? include_diagonal
                                 : (part == Triangle::lower ? j < i : j > i);
      if (keep) {
        t.col_idx_.push_back(j);
        t.values_.push_back(values_[k]);
      }
    }
    t.row_ptr_[i + 1] = static_cast<Index>(t.col_idx_.size());
  }
  return t;
}

SparseMatrix SparseMatrix::scaled(double alpha) const {
  SparseMatrix s = *this;
  for (auto &v : s.values_)
    v *= alpha;
  if (alpha == 0.0)
    return SparseMatrix(rows_, cols_);
  return s;
}

double SparseMatrix::max_asymmetry() const {
  require(rows_ == cols_, "asymmetry of a non-square matrix");
  double worst = 0.0;
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      worst = std::max(worst, std::abs(values_[k] - coeff(col_idx_[k], i)));
  }
  return worst;
}

SparseMatrix SparseMatrix::mirrored_from_upper() const {
  require(rows_ == cols_, "mirror of a non-square matrix");
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const Index j = col_idx_[k];
      if (j < i)
        continue;
      t.push_back({i, j, values_[k]});
      if (j > i)
        t.push_back({j, i, values_[k]});
    }
  }
  return from_triplets(rows_, cols_, t);
}

void SparseMatrix::multiply(const Vector &x, Vector &y) const {
  require(x.size() == cols_, "spmv: x has wrong length");
  y.resize(rows_);
  for (Index i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
}

void SparseMatrix::multiply_add(const Vector &x, Vector &y, double alpha) const {
  require(x.size() == cols_ && y.size() == rows_, "spmv-add: wrong lengths");
  for (Index i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      s += values_[k] * x[col_idx_[k]];
    y[i] += alpha * s;
  }
}

void SparseMatrix::transpose_multiply(const Vector &x, Vector &y) const {
  require(x.size() == rows_, "spmv^T: x has wrong length");
  y.setZero(cols_);
  for (Index i = 0; i < rows_; ++i) {
    const double xi = x[i];
    if (xi == 0.0)
      continue;
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      y[col_idx_[k]] += values_[k] * xi;
  }
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d = DenseMatrix::Zero(rows_, cols_);
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      d(i, col_idx_[k]) = values_[k];
  return d;
}

double SparseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : values_)
    s += v * v;
  return std::sqrt(s);
}

void SparseMatrix::write_matrix_market(std::ostream &os) const {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << rows_ << ' ' << cols_ << ' ' << nnz() << '\n';
  os.precision(17);
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      os << i + 1 << ' ' << col_idx_[k] + 1 << ' ' << values_[k] << '\n';
}

Vector spmv(const SparseMatrix &a, const Vector &x) {
  Vector y;
  a.multiply(x, y);
  return y;
}

SparseMatrix multiply(const SparseMatrix &a, const SparseMatrix &b) {
  require(a.cols() == b.rows(), "sparse product: inner dimensions differ");
  std::vector<Triplet> out;
  std::vector<double> acc(static_cast<std::size_t>(b.cols()), 0.0);
  std::vector<char> used(static_cast<std::size_t>(b.cols()), 0);
  std::vector<Index> touched;
  for (Index i = 0; i < a.rows(); ++i) {
    const auto acols = a.row_cols(i);
    const auto avals = a.row_values(i);
    for (std::size_t p = 0; p < acols.size(); ++p) {
      const Index k = acols[p];
      const auto bcols = b.row_cols(k);
      const auto bvals = b.row_values(k);
      for (std::size_t q = 0; q < bcols.size(); ++q) {
        const Index j = bcols[q];
        if (!used[j]) {
          used[j] = 1;
          touched.push_back(j);
        }
        acc[j] += avals[p] * bvals[q];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (Index j : touched) {
      out.push_back({i, j, acc[j]});
      acc[j] = 0.0;
      used[j] = 0;
    }
    touched.clear();
  }
  return SparseMatrix::from_triplets(a.rows(), b.cols(), out);
}

SparseMatrix add(const SparseMatrix &a, const SparseMatrix &b, double alpha,
                 double beta) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          "sparse sum: shapes differ");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(a.nnz() + b.nnz()));
  for (Index i = 0; i < a.rows(); ++i) {
    const auto c = a.row_cols(i);
    const auto v = a.row_values(i);
    for (std::size_t k = 0; k < c.size(); ++k)
      t.push_back({i, c[k], alpha * v[k]});
  }
  for (Index i = 0; i < b.rows(); ++i) {
    const auto c = b.row_cols(i);
    const auto v = b.row_values(i);
    for (std::size_t k = 0; k < c.size(); ++k)
      t.push_back({i, c[k], beta * v[k]});
  }
  return SparseMatrix::from_triplets(a.rows(), a.cols(), t);
}

Vector tri_solve(const SparseMatrix &m, const Vector &b, Triangle part) {
  require(m.rows() == m.cols() && b.size() == m.rows(),
          "triangular solve: shapes differ");
  const Index n = m.rows();
  Vector x(n);
  auto solve_row = [&](Index i) {
    double s = b[i];
    double diag = 0.0;
    const auto c = m.row_cols(i);
    const auto v = m.row_values(i);
    for (std::size_t k = 0; k < c.size(); ++k) {
      const Index j = c[k];
      if (j == i)
        diag = v[k];
      else if (part == Triangle::lower ? j < i : j > i)
        s -= v[k] * x[j];
    }
    if (diag == 0.0)
      throw SingularSplitting("zero diagonal in triangular solve at row " +
                              std::to_string(i));
    x[i] = s / diag;
  };
  if (part == Triangle::lower)
    for (Index i = 0; i < n; ++i)
      solve_row(i);
  else
    for (Index i = n - 1; i >= 0; --i)
      solve_row(i);
  return x;
}

Vector tri_solve_transposed(const SparseMatrix &m, const Vector &b,
                            Triangle part) {
  require(m.rows() == m.cols() && b.size() == m.rows(),
          "triangular solve: shapes differ");
  const Index n = m.rows();
  Vector x = b;
  // M^T is lower when M is upper: column sweep over the rows of M.
  auto eliminate = [&](Index i) {
    const double diag = m.coeff(i, i);
    if (diag == 0.0)
      throw SingularSplitting("zero diagonal in triangular solve at row " +
                              std::to_string(i));
    x[i] /= diag;
    const auto c = m.row_cols(i);
    const auto v = m.row_values(i);
    for (std::size_t k = 0; k < c.size(); ++k) {
      const Index j = c[k];
      if (part == Triangle::upper ? j > i : j < i)
        x[j] -= v[k] * x[i];
    }
  };
  if (part == Triangle::upper)
    for (Index i = 0; i < n; ++i)
      eliminate(i);
  else
    for (Index i = n - 1; i >= 0; --i)
      eliminate(i);
  return x;
}

double frobenius_distance(const SparseMatrix &a, const SparseMatrix &b) {
  return add(a, b, 1.0, -1.0).frobenius_norm();
}

} // namespace mgmc
