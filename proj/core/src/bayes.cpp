#include "mgmc/bayes.hpp"

#include "mgmc/dense.hpp"
#include "mgmc/errors.hpp"

#include <Eigen/LU>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace mgmc {

namespace {

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ','))
    out.push_back(cell);
  return out;
}

double parse_double(const std::string &s, const std::filesystem::path &path, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (pos != s.size())
      throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw ConfigError(path.string() + ":" + std::to_string(line) +
                      ": not a number: '" + s + "'");
  }
}

} // namespace

ObservationSet read_observations_csv(const std::filesystem::path &path, int dim,
                                     double radius) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open observation file " + path.string());
  const std::size_t columns = static_cast<std::size_t>(dim) + 2;
  std::vector<std::array<double, 3>> centres;
  std::vector<double> values, variances;
  std::string line;
  int line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line[0] == '#')
      continue;
    if (header) {
      header = false;
      continue;
    }
    const auto cells = split_csv_line(line);
    if (cells.size() != columns)
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(columns) + " columns");
    std::array<double, 3> c{0.5, 0.5, 0.5};
    for (int e = 0; e < dim; ++e)
      c[static_cast<std::size_t>(e)] = parse_double(cells[static_cast<std::size_t>(e)], path, line_no);
    centres.push_back(c);
    values.push_back(parse_double(cells[static_cast<std::size_t>(dim)], path, line_no));
    const double s2 = parse_double(cells[static_cast<std::size_t>(dim) + 1], path, line_no);
    if (!(s2 > 0.0))
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": sigma2 must be positive");
    variances.push_back(s2);
  }
  ObservationSet obs;
  obs.centres = std::move(centres);
  obs.radius = radius;
  obs.values = Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
  obs.variances =
      Eigen::Map<const Vector>(variances.data(), static_cast<Index>(variances.size()));
  return obs;
}

void write_observations_csv(const std::filesystem::path &path, const ObservationSet &obs,
                            int dim) {
  std::ofstream out(path);
  if (!out)
    throw ConfigError("cannot write " + path.string());
  const char *names[] = {"x", "y", "z"};
  for (int e = 0; e < dim; ++e)
    out << names[e] << ',';
  out << "value,sigma2\n" << std::setprecision(17);
  for (Index j = 0; j < obs.size(); ++j) {
    for (int e = 0; e < dim; ++e)
      out << obs.centres[static_cast<std::size_t>(j)][static_cast<std::size_t>(e)] << ',';
    out << obs.values[j] << ',' << obs.variances[j] << '\n';
  }
}

NoiseCovariance NoiseCovariance::diagonal(const Vector &variances) {
  for (Index i = 0; i < variances.size(); ++i)
    if (!(variances[i] > 0.0))
      throw InvalidArgument("noise variances must be positive");
  NoiseCovariance g;
  g.size_ = variances.size();
  g.variances_ = variances;
  return g;
}

NoiseCovariance NoiseCovariance::dense(const DenseMatrix &gamma) {
  if (gamma.rows() != gamma.cols())
    throw DimensionMismatch("noise covariance must be square");
  if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() > 0.0)
    throw InvalidArgument("noise covariance must be symmetric");
  NoiseCovariance g;
  g.size_ = gamma.rows();
  g.full_ = gamma;
  g.lower_ = dense_cholesky_lower(gamma);
  g.variances_ = gamma.diagonal();
  return g;
}

DenseMatrix NoiseCovariance::matrix() const {
  if (is_diagonal())
    return variances_.asDiagonal();
  return full_;
}

DenseMatrix NoiseCovariance::inverse() const {
  if (is_diagonal())
    return variances_.cwiseInverse().asDiagonal();
  return spd_inverse(full_);
}

Vector NoiseCovariance::apply_inverse(const Vector &v) const {
  if (v.size() != size_)
    throw DimensionMismatch("noise covariance: vector length");
  if (is_diagonal())
    return v.cwiseQuotient(variances_);
  const Vector w = lower_.triangularView<Eigen::Lower>().solve(v);
  return lower_.transpose().triangularView<Eigen::Upper>().solve(w);
}

void NoiseCovariance::sample_inverse(Vector &out, RngStream &rng) const {
  out.resize(size_);
  rng.fill_normal(out);
  if (is_diagonal()) {
    for (Index j = 0; j < size_; ++j)
      out[j] /= std::sqrt(variances_[j]);
    return;
  }
  // Gamma = L L^T, so L^{-T} z has covariance Gamma^{-1}
  out = lower_.transpose().triangularView<Eigen::Upper>().solve(out);
}

Vector ball_average_vector(const Grid &grid, const std::array<double, 3> &centre,
                           double radius) {
  if (!(radius >= 0.0))
    throw InvalidArgument("ball radius must be non-negative");
  Vector w = Vector::Zero(grid.size());
  const int d = grid.dim();
  const double h = grid.h();
  // scan only the bounding box of the ball
  std::array<Index, 3> lo{1, 1, 1}, hi{1, 1, 1};
  for (int e = 0; e < d; ++e) {
    const auto k = static_cast<std::size_t>(e);
    lo[k] = std::max<Index>(1, static_cast<Index>(std::floor((centre[k] - radius) / h)));
    hi[k] = std::min<Index>(grid.cells() - 1,
                            static_cast<Index>(std::ceil((centre[k] + radius) / h)));
  }
  std::vector<Index> inside;
  for (Index k = lo[2]; k <= hi[2]; ++k)
    for (Index j = lo[1]; j <= hi[1]; ++j)
      for (Index i = lo[0]; i <= hi[0]; ++i) {
        const std::array<Index, 3> ijk{i, j, d == 3 ? k : 0};
        const Index idx = grid.index(ijk);
        if (idx < 0)
          continue;
        const auto x = grid.position(idx);
        double dist2 = 0.0;
        for (int e = 0; e < d; ++e) {
          const double dx = x[static_cast<std::size_t>(e)] - centre[static_cast<std::size_t>(e)];
          dist2 += dx * dx;
        }
        if (dist2 <= radius * radius + 1e-20)
          inside.push_back(idx);
      }
  if (inside.empty()) {
    std::ostringstream msg;
    msg << "ball of radius " << radius << " at (" << centre[0] << ", " << centre[1];
    if (d == 3)
      msg << ", " << centre[2];
    msg << ") contains no vertex of the " << grid.cells() << "-cell grid";
    throw ResolutionTooCoarse(msg.str());
  }
  const double weight = 1.0 / static_cast<double>(inside.size());
  for (const Index idx : inside)
    w[idx] = weight;
  return w;
}

SparseMatrix ball_average_rows(const Grid &grid, const ObservationSet &obs) {
  if (!(obs.radius > 0.0))
    throw InvalidArgument("observation radius must be positive");
  std::vector<Triplet> t;
  for (Index j = 0; j < obs.size(); ++j) {
    const Vector w = ball_average_vector(grid, obs.centres[static_cast<std::size_t>(j)], obs.radius);
    for (Index i = 0; i < w.size(); ++i)
      if (w[i] != 0.0)
        t.push_back({i, j, w[i]});
  }
  return SparseMatrix::from_triplets(grid.size(), obs.size(), t);
}

Vector posterior_rhs(const SparseMatrix &b, const NoiseCovariance &gamma, const Vector &y) {
  if (b.cols() != gamma.size() || y.size() != gamma.size())
    throw DimensionMismatch("posterior_rhs: sizes do not conform");
  Vector f(b.rows());
  b.multiply(gamma.apply_inverse(y), f);
  return f;
}

LowRankPrecompute precompute_lowrank(const SparseMatrix &a, const SparseMatrix &b,
                                     const NoiseCovariance &gamma, double omega,
                                     Direction direction) {
  if (!(omega > 0.0 && omega < 2.0))
    throw InvalidArgument("relaxation parameter must lie in (0, 2)");
  if (a.rows() != a.cols() || b.rows() != a.rows() || b.cols() != gamma.size())
    throw DimensionMismatch("precompute_lowrank: sizes do not conform");
  const Vector diag = a.diagonal();
  for (Index i = 0; i < diag.size(); ++i)
    if (!(diag[i] > 0.0))
      throw SingularSplitting("diagonal entry " + std::to_string(i) + " is not positive");

  const Triangle part = direction == Direction::forward ? Triangle::lower : Triangle::upper;
  LowRankPrecompute pre;
  pre.direction = direction;
  pre.omega = omega;
  pre.triangular = add(a.triangle(part, false), SparseMatrix::diagonal(diag / omega));
  pre.diagonal = diag;
  pre.noise_scale = (diag * ((2.0 - omega) / omega)).cwiseSqrt();

  const Index beta = b.cols();
  pre.bstar = DenseMatrix::Zero(a.rows(), beta);
  if (beta == 0)
    return pre;

  const DenseMatrix bd = b.to_dense();
  DenseMatrix c(a.rows(), beta);
  for (Index k = 0; k < beta; ++k)
    c.col(k) = tri_solve(pre.triangular, bd.col(k), part);
  const DenseMatrix capacitance = gamma.matrix() + bd.transpose() * c;
  Eigen::FullPivLU<DenseMatrix> lu(capacitance);
  if (!lu.isInvertible())
    throw IllPosedObservations("capacitance matrix Gamma + B^T M^{-1} B is singular");
  pre.bstar = c * lu.inverse();
  return pre;
}

PosteriorProblem::PosteriorProblem(Hierarchy hierarchy, NoiseCovariance gamma, Vector y)
    : hierarchy_(std::move(hierarchy)), gamma_(std::move(gamma)), y_(std::move(y)) {
  const Level &fine = hierarchy_.fine();
  if (fine.observation.cols() != gamma_.size() || y_.size() != gamma_.size())
    throw DimensionMismatch("posterior: observation sizes do not conform");
  f_ = posterior_rhs(fine.observation, gamma_, y_);
}

PosteriorProblem::PosteriorProblem(Hierarchy hierarchy, NoiseCovariance gamma, Vector y,
                                   Vector f)
    : hierarchy_(std::move(hierarchy)), gamma_(std::move(gamma)), y_(std::move(y)),
      f_(std::move(f)) {}

PosteriorProblem PosteriorProblem::prior(Hierarchy hierarchy, Vector f) {
  if (hierarchy.fine().observation.cols() != 0)
    throw InvalidArgument("prior problem must not carry observations");
  if (f.size() != hierarchy.fine().grid.size())
    throw DimensionMismatch("prior problem: right-hand side length");
  return PosteriorProblem(std::move(hierarchy), NoiseCovariance::diagonal(Vector(0)),
                          Vector(0), std::move(f));
}

void PosteriorProblem::apply_precision(int l, const Vector &x, Vector &out) const {
  const Level &lv = level(l);
  lv.precision.multiply(x, out);
  if (beta() == 0)
    return;
  Vector bt(beta());
  lv.observation.transpose_multiply(x, bt);
  lv.observation.multiply_add(gamma_.apply_inverse(bt), out);
}

void PosteriorProblem::subtract_precision(int l, const Vector &x, Vector &out) const {
  const Level &lv = level(l);
  lv.precision.multiply_add(x, out, -1.0);
  if (beta() == 0)
    return;
  Vector bt(beta());
  lv.observation.transpose_multiply(x, bt);
  lv.observation.multiply_add(gamma_.apply_inverse(bt), out, -1.0);
}

SparseMatrix PosteriorProblem::assemble_precision(int l) const {
  const Level &lv = level(l);
  if (beta() == 0)
    return lv.precision;
  // B Gamma^{-1} B^T = W W^T with W = B L^{-T}; every (i,j) and (j,i) entry is
  // accumulated over the same k in the same order, so the result is exactly
  // symmetric.
  DenseMatrix lower = gamma_.is_diagonal()
                          ? DenseMatrix(gamma_.matrix().diagonal().cwiseSqrt().asDiagonal())
                          : dense_cholesky_lower(gamma_.matrix());
  const SparseMatrix bt = lv.observation.transpose();
  std::vector<Triplet> t;
  const auto rows = lv.precision.row_ptr();
  const auto cols = lv.precision.col_idx();
  const auto vals = lv.precision.values();
  for (Index i = 0; i < lv.precision.rows(); ++i)
    for (Index p = rows[i]; p < rows[i + 1]; ++p)
      t.push_back({i, cols[p], vals[p]});

  const Index n = lv.precision.rows();
  const Index beta_ = beta();
  // support of the whitened columns: union of supports of B's columns that
  // feed into them (L^{-T} is upper triangular)
  const DenseMatrix linv_t =
      lower.triangularView<Eigen::Lower>().solve(DenseMatrix::Identity(beta_, beta_)).transpose();
  for (Index k = 0; k < beta_; ++k) {
    std::vector<std::pair<Index, double>> column;
    {
      Vector wk = Vector::Zero(n);
      for (Index m = 0; m < beta_; ++m) {
        const double coeff = linv_t(m, k);
        if (coeff == 0.0)
          continue;
        const auto bc = bt.row_cols(m);
        const auto bv = bt.row_values(m);
        for (std::size_t q = 0; q < bc.size(); ++q)
          wk[bc[q]] += bv[q] * coeff;
      }
      for (Index i = 0; i < n; ++i)
        if (wk[i] != 0.0)
          column.emplace_back(i, wk[i]);
    }
    for (const auto &[i, wi] : column)
      for (const auto &[j, wj] : column)
        t.push_back({i, j, wi * wj});
  }
  return SparseMatrix::from_triplets(n, n, t);
}

DenseMatrix PosteriorProblem::dense_precision(int l) const {
  require_oracle_size(size(l), "dense_precision");
  DenseMatrix a = level(l).precision.to_dense();
  if (beta() == 0)
    return a;
  const DenseMatrix b = level(l).observation.to_dense();
  DenseMatrix lr = b * gamma_.inverse() * b.transpose();
  lr = 0.5 * (lr + lr.transpose());
  a += lr;
  return a;
}

ObservationSet synthesise_observations(int dim, Index count, double radius,
                                       std::array<double, 2> value_range,
                                       std::array<double, 2> variance_range,
                                       std::uint64_t seed) {
  if (dim != 2 && dim != 3)
    throw InvalidArgument("dimension must be 2 or 3");
  if (count < 0)
    throw InvalidArgument("observation count must be non-negative");
  ObservationSet obs;
  obs.radius = radius;
  obs.values.resize(count);
  obs.variances.resize(count);
  if (count == 0)
    return obs;

  Index per_side = 1;
  while (static_cast<Index>(std::pow(static_cast<double>(per_side), dim) + 0.5) < count)
    ++per_side;
  const double lo = 0.2, hi = 0.8;
  const double cell = (hi - lo) / static_cast<double>(per_side);

  RngStream rng(seed, 0x0b5e7ULL);
  for (Index j = 0; j < count; ++j) {
    Index rem = j;
    std::array<double, 3> c{0.5, 0.5, 0.5};
    for (int e = 0; e < dim; ++e) {
      const Index slot = rem % per_side;
      rem /= per_side;
      const double mid = lo + (static_cast<double>(slot) + 0.5) * cell;
      c[static_cast<std::size_t>(e)] = mid + rng.uniform(-0.25, 0.25) * cell;
    }
    obs.centres.push_back(c);
    obs.values[j] = rng.uniform(value_range[0], value_range[1]);
    obs.variances[j] = rng.uniform(variance_range[0], variance_range[1]);
  }
  return obs;
}

} // namespace mgmc
