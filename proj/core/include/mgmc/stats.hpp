#pragma once

#include "mgmc/grid.hpp"
#include "mgmc/sparse.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mgmc {

/// Scalar QoI time series z^(m) = F^T theta^(m).
struct SampleSeries {
  std::vector<double> values;
  std::string sampler;
  Index grid_cells = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  Index warmup = 0; ///< leading values already discarded

  Index size() const { return static_cast<Index>(values.size()); }
};

struct IactEstimate {
  double tau = 1.0;
  double stderr_ = 0.0;
  Index window = 0;
};

/// Ball average of radius R around centre, as a vector F with z = F^T theta.
Vector qoi_vector(const Grid &grid, const std::array<double, 3> &centre, double radius);

double sample_mean(std::span<const double> z);

/// Gamma(t) = 1/(M-t) sum_m (z_m - zbar)(z_{m+t} - zbar)
double autocorrelation(std::span<const double> z, Index t);

/// 1 + 2 sum_{t=1}^{W} Gamma(t)/Gamma(0)
double iact_at_window(std::span<const double> z, Index window);

/// Integrated autocorrelation time with automatic windowing: W is the first
/// t with exp(-t/tau_eff) - tau_eff/sqrt(t M) < 0, where
/// tau_eff = S / ln((2 tau_w + 1)/(2 tau_w - 1)) and tau_w = tau(t)/2.
/// Throws UnreliableIact if no window below M/2 qualifies.
IactEstimate iact_wolff(std::span<const double> z, double s_factor = 1.5);

/// M / tau
double effective_sample_size(std::span<const double> z, double s_factor = 1.5);

/// Rows are chains, column m holds z after m updates (column 0 is the start).
struct ConvergenceRatios {
  std::vector<double> mean_ratio;     ///< R(m)
  std::vector<double> variance_ratio; ///< Z(m)
  std::vector<double> mean_rel_error;
  std::vector<double> variance_rel_error;
};

/// R(m) = |mu(m) - mu| / |mu(0) - mu| and Z(m) likewise for the variance
/// across chains, with the relative statistical error of every entry.
ConvergenceRatios convergence_ratios(const DenseMatrix &chains, double mu, double sigma2);

/// R(m*)^{1/m*} with m* the largest m >= 1 whose relative error is at most
/// max_rel_error; m* = 1 when none qualifies.
double convergence_rate(std::span<const double> ratios, std::span<const double> rel_errors,
                        double max_rel_error = 0.1);
int convergence_rate_step(std::span<const double> rel_errors, double max_rel_error = 0.1);

/// Rows are chains, column m-1 holds z after m updates. For every M in
/// lengths: sqrt(mean_j (mu - mean(z_j[0..M)))^2).
std::vector<double> rmse_curve(const DenseMatrix &chains, double mu,
                               std::span<const Index> lengths);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

} // namespace mgmc
