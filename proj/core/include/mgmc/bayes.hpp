#pragma once

#include "mgmc/discretise.hpp"
#include "mgmc/rng.hpp"
#include "mgmc/sparse.hpp"

#include <array>
#include <filesystem>
#include <vector>

namespace mgmc {

/// Point observations obtained by averaging the field over balls of radius R.
struct ObservationSet {
  std::vector<std::array<double, 3>> centres;
  double radius = 0.025;
  Vector values;    ///< y, length beta
  Vector variances; ///< sigma_j^2, diagonal of Gamma

  Index size() const { return static_cast<Index>(centres.size()); }
};

/// Reads observations from CSV with a header row and columns
/// `x,y[,z],value,sigma2`.
ObservationSet read_observations_csv(const std::filesystem::path &path, int dim,
                                     double radius);
void write_observations_csv(const std::filesystem::path &path,
                            const ObservationSet &obs, int dim);

/// Observation noise covariance Gamma (beta x beta, SPD).
class NoiseCovariance {
public:
  NoiseCovariance() = default;
  static NoiseCovariance diagonal(const Vector &variances);
  static NoiseCovariance dense(const DenseMatrix &gamma);

  Index size() const { return size_; }
  bool is_diagonal() const { return full_.size() == 0; }

  DenseMatrix matrix() const;
  DenseMatrix inverse() const;
  Vector apply_inverse(const Vector &v) const;
  /// Draws from N(0, Gamma^{-1}).
  void sample_inverse(Vector &out, RngStream &rng) const;

private:
  Index size_ = 0;
  Vector variances_;
  DenseMatrix full_;
  DenseMatrix lower_; // Gamma = L L^T
};

/// B_L with one column per observation ball: weight 1/count at every interior
/// vertex within distance R of the centre (count = vertices inside).
SparseMatrix ball_average_rows(const Grid &grid, const ObservationSet &obs);
/// Single ball-average column as a dense vector (quantity of interest F_L).
Vector ball_average_vector(const Grid &grid, const std::array<double, 3> &centre,
                           double radius);

/// f_L = B_L Gamma^{-1} y
Vector posterior_rhs(const SparseMatrix &b, const NoiseCovariance &gamma,
                     const Vector &y);

enum class Direction { forward, backward };

/// Per-level data of the Gibbs smoother with low-rank correction:
/// the triangular matrix M = D/omega + L (forward) or D/omega + L^T
/// (backward) and B* = M^{-1} B (Gamma + B^T M^{-1} B)^{-1}.
struct LowRankPrecompute {
  Direction direction = Direction::forward;
  double omega = 1.0;
  SparseMatrix triangular;
  DenseMatrix bstar;   ///< n x beta
  Vector diagonal;     ///< a_ii
  Vector noise_scale;  ///< sqrt((2 - omega) / omega * a_ii)
};

LowRankPrecompute precompute_lowrank(const SparseMatrix &a, const SparseMatrix &b,
                                     const NoiseCovariance &gamma, double omega,
                                     Direction direction);

/// Target N(Ã^{-1} f, Ã^{-1}) with Ã_l = A_l + B_l Gamma^{-1} B_l^T on every
/// level of a Galerkin hierarchy. Ã is never formed unless asked for.
class PosteriorProblem {
public:
  PosteriorProblem(Hierarchy hierarchy, NoiseCovariance gamma, Vector y);
  /// Prior-only target (beta = 0) with an explicit right-hand side.
  static PosteriorProblem prior(Hierarchy hierarchy, Vector f);

  const Hierarchy &hierarchy() const { return hierarchy_; }
  int finest() const { return hierarchy_.finest(); }
  const Level &level(int l) const { return hierarchy_[l]; }
  Index size(int l) const { return hierarchy_[l].grid.size(); }
  Index beta() const { return gamma_.size(); }
  const NoiseCovariance &noise() const { return gamma_; }
  const Vector &data() const { return y_; }
  const Vector &rhs() const { return f_; }

  /// out = Ã_l x
  void apply_precision(int l, const Vector &x, Vector &out) const;
  /// out -= Ã_l x
  void subtract_precision(int l, const Vector &x, Vector &out) const;

  /// Explicit sparse Ã_l (exactly symmetric).
  SparseMatrix assemble_precision(int l) const;
  /// Dense Ã_l, subject to the oracle cap.
  DenseMatrix dense_precision(int l) const;

private:
  PosteriorProblem(Hierarchy hierarchy, NoiseCovariance gamma, Vector y, Vector f);

  Hierarchy hierarchy_;
  NoiseCovariance gamma_;
  Vector y_;
  Vector f_;
};

/// Observation ball centres on a jittered lattice inside [0.2, 0.8]^d, values
/// and variances uniform in the given ranges; deterministic in the seed.
ObservationSet synthesise_observations(int dim, Index count, double radius,
                                       std::array<double, 2> value_range,
                                       std::array<double, 2> variance_range,
                                       std::uint64_t seed);

} // namespace mgmc
