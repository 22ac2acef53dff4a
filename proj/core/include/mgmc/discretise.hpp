#pragma once

#include "mgmc/grid.hpp"
#include "mgmc/sparse.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mgmc {

enum class OperatorKind {
  shifted_laplace_fd,
  shifted_laplace_fem,
  squared_shifted_laplace_fd,
};

std::string to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(const std::string &name);

/// Prior precision operator -Laplace + kappa^2 (or its square).
struct OperatorSpec {
  OperatorKind kind = OperatorKind::shifted_laplace_fem;
  double kappa_sq = 100.0;
};

/// Prior precision on the interior vertices of grid.
///
/// Finite difference operators are scaled by h^d so that their magnitude is
/// comparable with the finite element matrices. The squared operator is the
/// 13-point expansion of (-Laplace_h + kappa^2)^2 with the clamped condition
/// du/dn = 0 imposed through ghost-point reflection.
SparseMatrix assemble_prior(const Grid &grid, const OperatorSpec &spec);

/// Canonical (multilinear) prolongation from coarse to fine interior vertices.
SparseMatrix build_prolongation(const Grid &fine, const Grid &coarse);

/// P^T A P, exactly symmetric whenever A is.
SparseMatrix galerkin_coarsen(const SparseMatrix &a_fine, const SparseMatrix &p);

/// Number of coarsening steps available: halve while cells is even and the
/// result keeps at least 2 cells per side.
int max_coarsenings(Index cells);

struct Level {
  Grid grid;
  SparseMatrix precision;    ///< prior precision A_l
  SparseMatrix observation;  ///< B_l, n_l x beta (beta may be 0)
  SparseMatrix prolongation; ///< maps level l-1 to l; empty on level 0
};

/// Level 0 is the coarsest, level L = levels.size()-1 the finest.
struct Hierarchy {
  std::vector<Level> levels;

  int finest() const { return static_cast<int>(levels.size()) - 1; }
  const Level &operator[](int l) const { return levels[static_cast<std::size_t>(l)]; }
  const Level &fine() const { return levels.back(); }
};

/// Galerkin hierarchy with `coarsenings` levels below the finest one
/// (all available levels when not given). B_{l-1} = P^T B_l.
Hierarchy build_hierarchy(const Grid &fine, const OperatorSpec &spec,
                          const std::optional<SparseMatrix> &observation = {},
                          std::optional<int> coarsenings = {});

/// Same, starting from an already assembled fine-level matrix.
Hierarchy build_hierarchy_from_matrix(const Grid &fine, SparseMatrix a_fine,
                                      const std::optional<SparseMatrix> &observation,
                                      std::optional<int> coarsenings);

} // namespace mgmc
