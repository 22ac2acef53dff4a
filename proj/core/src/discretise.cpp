#include "mgmc/discretise.hpp"

#include "mgmc/errors.hpp"

#include <cmath>

namespace mgmc {

std::string to_string(OperatorKind kind) {
  switch (kind) {
  case OperatorKind::shifted_laplace_fd:
    return "shifted_laplace_fd";
  case OperatorKind::shifted_laplace_fem:
    return "shifted_laplace_fem";
  case OperatorKind::squared_shifted_laplace_fd:
    return "squared_shifted_laplace_fd";
  }
  return "unknown";
}

OperatorKind operator_kind_from_string(const std::string &name) {
  if (name == "shifted_laplace_fd")
    return OperatorKind::shifted_laplace_fd;
  if (name == "shifted_laplace_fem")
    return OperatorKind::shifted_laplace_fem;
  if (name == "squared_shifted_laplace_fd")
    return OperatorKind::squared_shifted_laplace_fd;
  throw InvalidArgument("unknown operator kind '" + name + "'");
}

namespace {

using Coord = std::array<Index, 3>;

template <class F> void for_each_vertex(const Grid &grid, F &&f) {
  for (Index idx = 0; idx < grid.size(); ++idx)
    f(idx, grid.coordinates(idx));
}

SparseMatrix shifted_laplace_fd(const Grid &grid, double kappa_sq) {
  const int d = grid.dim();
  const double h = grid.h();
  const double hd = std::pow(h, d);
  const double offdiag = -hd / (h * h);
  const double diag = hd * (2.0 * d / (h * h) + kappa_sq);

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(grid.size() * (2 * d + 1)));
  for_each_vertex(grid, [&](Index row, const Coord &c) {
    for (int dir = d - 1; dir >= 0; --dir) {
      Coord nb = c;
      nb[dir] -= 1;
      if (const Index col = grid.index(nb); col >= 0)
        t.push_back({row, col, offdiag});
    }
    t.push_back({row, row, diag});
    for (int dir = 0; dir < d; ++dir) {
      Coord nb = c;
      nb[dir] += 1;
      if (const Index col = grid.index(nb); col >= 0)
        t.push_back({row, col, offdiag});
    }
  });
  return SparseMatrix::from_triplets(grid.size(), grid.size(), t);
}

SparseMatrix squared_shifted_laplace_fd(const Grid &grid, double kappa_sq) {
  if (grid.dim() != 2)
    throw InvalidArgument("squared shifted Laplace is only available in 2D");
  const double h = grid.h();
  const double inv_h2 = 1.0 / (h * h);
  // h^2 * [ (Laplace_h)^2 + 2 kappa^2 (-Laplace_h) + kappa^4 ]
  const double centre = 20.0 * inv_h2 + 8.0 * kappa_sq + kappa_sq * kappa_sq * h * h;
  const double edge = -8.0 * inv_h2 - 2.0 * kappa_sq;
  const double corner = 2.0 * inv_h2;
  const double far = inv_h2;
  const Index n = grid.cells();

  struct Tap {
    Index dx, dy;
    double w;
  };
  const Tap taps[] = {
      {0, -2, far},   {-1, -1, corner}, {0, -1, edge},   {1, -1, corner},
      {-2, 0, far},   {-1, 0, edge},    {1, 0, edge},    {2, 0, far},
      {-1, 1, corner}, {0, 1, edge},    {1, 1, corner},  {0, 2, far},
  };

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(grid.size() * 13));
  for_each_vertex(grid, [&](Index row, const Coord &c) {
    double diag = centre;
    // ghost points one cell outside the boundary reflect onto the vertex
    // itself (u_{-1} = u_{1}), which enforces du/dn = 0
    for (int dir = 0; dir < 2; ++dir) {
      if (c[dir] == 1)
        diag += far;
      if (c[dir] == n - 1)
        diag += far;
    }
    for (const auto &tap : taps) {
      const Coord nb{c[0] + tap.dx, c[1] + tap.dy, 0};
      if (const Index col = grid.index(nb); col >= 0)
        t.push_back({row, col, tap.w});
    }
    t.push_back({row, row, diag});
  });
  return SparseMatrix::from_triplets(grid.size(), grid.size(), t);
}

SparseMatrix shifted_laplace_fem(const Grid &grid, double kappa_sq) {
  const int d = grid.dim();
  const double h = grid.h();
  const double k1[2][2] = {{1.0 / h, -1.0 / h}, {-1.0 / h, 1.0 / h}};
  const double m1[2][2] = {{h / 3.0, h / 6.0}, {h / 6.0, h / 3.0}};
  const int nloc = 1 << d;

  // Q1 element matrix on a cube of side h: stiffness + kappa^2 * mass
  std::vector<double> element(static_cast<std::size_t>(nloc * nloc));
  for (int a = 0; a < nloc; ++a) {
    for (int b = 0; b < nloc; ++b) {
      double stiffness = 0.0;
      for (int dir = 0; dir < d; ++dir) {
        double term = 1.0;
        for (int e = 0; e < d; ++e) {
          const int ia = (a >> e) & 1;
          const int ib = (b >> e) & 1;
          term *= (e == dir) ? k1[ia][ib] : m1[ia][ib];
        }
        stiffness += term;
      }
      double mass = 1.0;
      for (int e = 0; e < d; ++e)
        mass *= m1[(a >> e) & 1][(b >> e) & 1];
      element[static_cast<std::size_t>(a * nloc + b)] = stiffness + kappa_sq * mass;
    }
  }

  const Index n = grid.cells();
  const Index ncells = d == 2 ? n * n : n * n * n;
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(ncells * nloc * nloc));
  std::vector<Index> local(static_cast<std::size_t>(nloc));
  for (Index cell = 0; cell < ncells; ++cell) {
    const Coord origin{cell % n, (cell / n) % n, d == 3 ? cell / (n * n) : 0};
    for (int a = 0; a < nloc; ++a) {
      Coord v = origin;
      for (int e = 0; e < d; ++e)
        v[e] += (a >> e) & 1;
      local[static_cast<std::size_t>(a)] = grid.index(v);
    }
    for (int a = 0; a < nloc; ++a) {
      const Index row = local[static_cast<std::size_t>(a)];
      if (row < 0)
        continue;
      for (int b = 0; b < nloc; ++b) {
        const Index col = local[static_cast<std::size_t>(b)];
        if (col >= 0)
          t.push_back({row, col, element[static_cast<std::size_t>(a * nloc + b)]});
      }
    }
  }
  return SparseMatrix::from_triplets(grid.size(), grid.size(), t);
}

} // namespace

SparseMatrix assemble_prior(const Grid &grid, const OperatorSpec &spec) {
  if (!(spec.kappa_sq > 0.0))
    throw InvalidArgument("kappa^2 must be positive");
  switch (spec.kind) {
  case OperatorKind::shifted_laplace_fd:
    return shifted_laplace_fd(grid, spec.kappa_sq);
  case OperatorKind::shifted_laplace_fem:
    return shifted_laplace_fem(grid, spec.kappa_sq);
  case OperatorKind::squared_shifted_laplace_fd:
    return squared_shifted_laplace_fd(grid, spec.kappa_sq);
  }
  throw InvalidArgument("unsupported operator kind");
}

SparseMatrix build_prolongation(const Grid &fine, const Grid &coarse) {
  if (!fine.refines(coarse))
    throw InvalidArgument("prolongation: grids are not nested");
  const int d = fine.dim();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(fine.size() * (1 << d)));
  for (Index row = 0; row < fine.size(); ++row) {
    const auto c = fine.coordinates(row);
    // per direction: up to two coarse coordinates with their 1D weights
    Index cc[3][2];
    double w[3][2];
    int count[3] = {1, 1, 1};
    for (int e = 0; e < d; ++e) {
      if (c[e] % 2 == 0) {
        cc[e][0] = c[e] / 2;
        w[e][0] = 1.0;
        count[e] = 1;
      } else {
        cc[e][0] = (c[e] - 1) / 2;
        cc[e][1] = (c[e] + 1) / 2;
        w[e][0] = w[e][1] = 0.5;
        count[e] = 2;
      }
    }
    const int combos = count[0] * count[1] * (d == 3 ? count[2] : 1);
    for (int k = 0; k < combos; ++k) {
      Coord target{0, 0, 0};
      double weight = 1.0;
      int rem = k;
      for (int e = 0; e < d; ++e) {
        const int pick = rem % count[e];
        rem /= count[e];
        target[e] = cc[e][pick];
        weight *= w[e][pick];
      }
      if (const Index col = coarse.index(target); col >= 0)
        t.push_back({row, col, weight});
    }
  }
  return SparseMatrix::from_triplets(fine.size(), coarse.size(), t);
}

SparseMatrix galerkin_coarsen(const SparseMatrix &a_fine, const SparseMatrix &p) {
  if (a_fine.rows() != a_fine.cols() || a_fine.cols() != p.rows())
    throw DimensionMismatch("galerkin_coarsen: shapes do not conform");
  SparseMatrix coarse = multiply(p.transpose(), multiply(a_fine, p));
  if (a_fine.max_asymmetry() == 0.0)
    coarse = coarse.mirrored_from_upper();
  return coarse;
}

int max_coarsenings(Index cells) {
  int levels = 0;
  while (cells % 2 == 0 && cells / 2 >= 2) {
    cells /= 2;
    ++levels;
  }
  return levels;
}

Hierarchy build_hierarchy_from_matrix(const Grid &fine, SparseMatrix a_fine,
                                      const std::optional<SparseMatrix> &observation,
                                      std::optional<int> coarsenings) {
  const int available = max_coarsenings(fine.cells());
  const int depth = coarsenings.value_or(available);
  if (depth < 0 || depth > available)
    throw InvalidArgument("hierarchy: cannot coarsen " +
                          std::to_string(fine.cells()) + " cells " +
                          std::to_string(depth) + " times");
  if (a_fine.rows() != fine.size() || a_fine.cols() != fine.size())
    throw DimensionMismatch("hierarchy: fine matrix does not match grid");

  SparseMatrix b_fine = observation.value_or(SparseMatrix(fine.size(), 0));
  if (b_fine.rows() != fine.size())
    throw DimensionMismatch("hierarchy: observation matrix has wrong row count");

  std::vector<Level> fine_to_coarse;
  fine_to_coarse.push_back(Level{fine, std::move(a_fine), std::move(b_fine), {}});
  for (int l = 0; l < depth; ++l) {
    Level &current = fine_to_coarse.back();
    const Grid coarse = current.grid.coarsened();
    current.prolongation = build_prolongation(current.grid, coarse);
    SparseMatrix a = galerkin_coarsen(current.precision, current.prolongation);
    SparseMatrix b = multiply(current.prolongation.transpose(), current.observation);
    fine_to_coarse.push_back(Level{coarse, std::move(a), std::move(b), {}});
  }

  Hierarchy h;
  h.levels.assign(std::make_move_iterator(fine_to_coarse.rbegin()),
                  std::make_move_iterator(fine_to_coarse.rend()));
  return h;
}

Hierarchy build_hierarchy(const Grid &fine, const OperatorSpec &spec,
                          const std::optional<SparseMatrix> &observation,
                          std::optional<int> coarsenings) {
  return build_hierarchy_from_matrix(fine, assemble_prior(fine, spec), observation,
                                     coarsenings);
}

} // namespace mgmc
