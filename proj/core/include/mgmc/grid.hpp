#pragma once

#include "mgmc/sparse.hpp"

#include <array>

namespace mgmc {

/// Uniform structured grid on the unit cube [0,1]^d with n cells per side.
///
/// Only the (n-1)^d interior vertices carry unknowns (homogeneous Dirichlet
/// data on the boundary). Vertices are numbered lexicographically with the
/// x index running fastest; that ordering is also the Gibbs sweep order.
class Grid {
public:
  Grid(int dim, Index cells);

  int dim() const { return dim_; }
  Index cells() const { return cells_; }
  double h() const { return 1.0 / static_cast<double>(cells_); }
  Index points_per_side() const { return cells_ - 1; }
  Index size() const;

  /// Lexicographic index of interior vertex with integer coordinates in
  /// [1, cells-1]; returns -1 for boundary vertices.
  Index index(const std::array<Index, 3> &ijk) const;
  std::array<Index, 3> coordinates(Index idx) const;
  std::array<double, 3> position(Index idx) const;

  bool is_interior(const std::array<Index, 3> &ijk) const;

  /// True when this grid is a uniform refinement (factor 2) of coarse.
  bool refines(const Grid &coarse) const;
  Grid coarsened() const;

  friend bool operator==(const Grid &, const Grid &) = default;

private:
  int dim_;
  Index cells_;
};

} // namespace mgmc
