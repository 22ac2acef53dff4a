#include "mgmc/grid.hpp"

#include "mgmc/errors.hpp"

namespace mgmc {

Grid::Grid(int dim, Index cells) : dim_(dim), cells_(cells) {
  if (dim != 2 && dim != 3)
    throw InvalidArgument("grid dimension must be 2 or 3");
  if (cells < 2)
    throw InvalidArgument("grid needs at least 2 cells per side");
}

Index Grid::size() const {
  Index s = 1;
  for (int d = 0; d < dim_; ++d)
    s *= cells_ - 1;
  return s;
}

bool Grid::is_interior(const std::array<Index, 3> &ijk) const {
  for (int d = 0; d < dim_; ++d)
    if (ijk[d] <= 0 || ijk[d] >= cells_)
      return false;
  return true;
}

Index Grid::index(const std::array<Index, 3> &ijk) const {
  if (!is_interior(ijk))
    return -1;
  const Index m = cells_ - 1;
  Index idx = 0;
  for (int d = dim_ - 1; d >= 0; --d)
    idx = idx * m + (ijk[d] - 1);
  return idx;
}

std::array<Index, 3> Grid::coordinates(Index idx) const {
  const Index m = cells_ - 1;
  std::array<Index, 3> ijk{0, 0, 0};
  for (int d = 0; d < dim_; ++d) {
    ijk[d] = idx % m + 1;
    idx /= m;
  }
  return ijk;
}

std::array<double, 3> Grid::position(Index idx) const {
  const auto ijk = coordinates(idx);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int d = 0; d < dim_; ++d)
    x[d] = static_cast<double>(ijk[d]) * h();
  return x;
}

bool Grid::refines(const Grid &coarse) const {
  return dim_ == coarse.dim_ && cells_ == 2 * coarse.cells_;
}

Grid Grid::coarsened() const {
  if (cells_ % 2 != 0 || cells_ / 2 < 2)
    throw InvalidArgument("grid cannot be coarsened further");
  return Grid(dim_, cells_ / 2);
}

} // namespace mgmc
