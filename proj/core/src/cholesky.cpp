#include "mgmc/cholesky.hpp"

#include "mgmc/errors.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace mgmc {

namespace {

using EigenSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

EigenSparse to_eigen(const SparseMatrix &a) {
  std::vector<Eigen::Triplet<double, int>> t;
  t.reserve(static_cast<std::size_t>(a.nnz()));
  for (Index i = 0; i < a.rows(); ++i) {
    const auto c = a.row_cols(i);
    const auto v = a.row_values(i);
    for (std::size_t k = 0; k < c.size(); ++k)
      t.emplace_back(static_cast<int>(i), static_cast<int>(c[k]), v[k]);
  }
  EigenSparse m(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

template <class Solver>
TriangularFactor factorise(const EigenSparse &a) {
  Solver llt;
  llt.compute(a);
  if (llt.info() != Eigen::Success)
    throw NotSpd("sparse Cholesky: matrix is not numerically positive definite");

  // Eigen: P A P^T = L L^T with (P x)[indices[i]] = x[i].
  const auto &indices = llt.permutationP().indices();
  TriangularFactor f;
  f.orientation = Triangle::upper;
  f.permutation.resize(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    f.permutation[static_cast<std::size_t>(indices.size() == 0 ? i : indices[i])] = i;

  const EigenSparse upper = EigenSparse(llt.matrixU());
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(upper.nonZeros()));
  for (int col = 0; col < upper.outerSize(); ++col)
    for (EigenSparse::InnerIterator it(upper, col); it; ++it)
      t.push_back({it.row(), it.col(), it.value()});
  f.matrix = SparseMatrix::from_triplets(upper.rows(), upper.cols(), t);
  return f;
}

} // namespace

Vector TriangularFactor::permute(const Vector &x) const {
  Vector y(x.size());
  for (Index i = 0; i < x.size(); ++i)
    y[i] = x[permutation[i]];
  return y;
}

Vector TriangularFactor::permute_inverse(const Vector &x) const {
  Vector y(x.size());
  for (Index i = 0; i < x.size(); ++i)
    y[permutation[i]] = x[i];
  return y;
}

Vector TriangularFactor::forward_rhs(const Vector &f) const {
  return tri_solve_transposed(matrix, permute(f), Triangle::upper);
}

Vector TriangularFactor::solve_upper_permuted(const Vector &rhs) const {
  return permute_inverse(tri_solve(matrix, rhs, Triangle::upper));
}

Vector TriangularFactor::solve(const Vector &b) const {
  return solve_upper_permuted(forward_rhs(b));
}

SparseMatrix TriangularFactor::reconstruct() const {
  const SparseMatrix utu = multiply(matrix.transpose(), matrix);
  // entry (permutation[i], permutation[j]) of P^T B P is B(i, j)
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(utu.nnz()));
  for (Index i = 0; i < utu.rows(); ++i) {
    const auto c = utu.row_cols(i);
    const auto v = utu.row_values(i);
    for (std::size_t k = 0; k < c.size(); ++k)
      t.push_back({permutation[i], permutation[c[k]], v[k]});
  }
  return SparseMatrix::from_triplets(utu.rows(), utu.cols(), t);
}

TriangularFactor sparse_cholesky(const SparseMatrix &a, Ordering ordering) {
  if (a.rows() != a.cols())
    throw DimensionMismatch("sparse Cholesky of a non-square matrix");
  if (a.max_asymmetry() != 0.0)
    throw NotSpd("sparse Cholesky: matrix is not symmetric");
  const EigenSparse m = to_eigen(a);
  if (ordering == Ordering::natural)
    return factorise<Eigen::SimplicialLLT<EigenSparse, Eigen::Lower,
                                          Eigen::NaturalOrdering<int>>>(m);
  return factorise<
      Eigen::SimplicialLLT<EigenSparse, Eigen::Lower, Eigen::AMDOrdering<int>>>(m);
}

} // namespace mgmc
