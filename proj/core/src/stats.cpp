#include "mgmc/stats.hpp"

#include "mgmc/bayes.hpp"
#include "mgmc/errors.hpp"

#include <cmath>
#include <limits>

namespace mgmc {

Vector qoi_vector(const Grid &grid, const std::array<double, 3> &centre, double radius) {
  return ball_average_vector(grid, centre, radius);
}

double sample_mean(std::span<const double> z) {
  if (z.empty())
    throw InvalidArgument("mean of an empty series");
  double s = 0.0;
  for (const double v : z)
    s += v;
  return s / static_cast<double>(z.size());
}

namespace {

double autocov(std::span<const double> z, double mean, Index t) {
  const Index m = static_cast<Index>(z.size());
  double s = 0.0;
  for (Index i = 0; i + t < m; ++i)
    s += (z[static_cast<std::size_t>(i)] - mean) * (z[static_cast<std::size_t>(i + t)] - mean);
  return s / static_cast<double>(m - t);
}

} // namespace

double autocorrelation(std::span<const double> z, Index t) {
  const Index m = static_cast<Index>(z.size());
  if (t < 0 || t >= m)
    throw InvalidArgument("autocorrelation: lag must satisfy 0 <= t < M");
  return autocov(z, sample_mean(z), t);
}

double iact_at_window(std::span<const double> z, Index window) {
  const Index m = static_cast<Index>(z.size());
  if (window < 0 || window >= m)
    throw InvalidArgument("iact_at_window: window must satisfy 0 <= W < M");
  const double mean = sample_mean(z);
  const double g0 = autocov(z, mean, 0);
  if (!(g0 > 0.0))
    throw UnreliableIact("series has zero variance");
  double sum = 0.0;
  for (Index t = 1; t <= window; ++t)
    sum += autocov(z, mean, t) / g0;
  return 1.0 + 2.0 * sum;
}

IactEstimate iact_wolff(std::span<const double> z, double s_factor) {
  const Index m = static_cast<Index>(z.size());
  if (m < 100)
    throw InvalidArgument("iact_wolff needs at least 100 samples");
  if (!(s_factor > 0.0))
    throw InvalidArgument("iact_wolff: S must be positive");
  const double mean = sample_mean(z);
  const double g0 = autocov(z, mean, 0);
  if (!(g0 > 0.0))
    throw UnreliableIact("series has zero variance");

  const double md = static_cast<double>(m);
  double tau = 1.0;
  for (Index w = 1; 2 * w < m; ++w) {
    tau += 2.0 * autocov(z, mean, w) / g0;
    const double tau_w = 0.5 * tau;
    double tau_eff = std::numeric_limits<double>::min();
    if (tau_w > 0.5)
      tau_eff = s_factor / std::log((2.0 * tau_w + 1.0) / (2.0 * tau_w - 1.0));
    const double wd = static_cast<double>(w);
    const double g = std::exp(-wd / tau_eff) - tau_eff / std::sqrt(wd * md);
    if (g < 0.0) {
      IactEstimate e;
      e.tau = tau;
      e.window = w;
      e.stderr_ = tau * std::sqrt(2.0 * (2.0 * wd + 1.0) / md);
      return e;
    }
  }
  throw UnreliableIact("no admissible summation window below M/2 (M = " + std::to_string(m) +
                       ")");
}

double effective_sample_size(std::span<const double> z, double s_factor) {
  return static_cast<double>(z.size()) / iact_wolff(z, s_factor).tau;
}

ConvergenceRatios convergence_ratios(const DenseMatrix &chains, double mu, double sigma2) {
  const Index n = chains.rows();
  const Index steps = chains.cols();
  if (n < 2 || steps < 1)
    throw InvalidArgument("convergence_ratios: need at least two chains and one column");
  if (!(sigma2 > 0.0))
    throw InvalidArgument("convergence_ratios: target variance must be positive");
  ConvergenceRatios out;
  const double nd = static_cast<double>(n);
  std::vector<double> means(static_cast<std::size_t>(steps)), vars(static_cast<std::size_t>(steps));
  for (Index m = 0; m < steps; ++m) {
    const auto col = chains.col(m);
    const double mean = col.mean();
    means[static_cast<std::size_t>(m)] = mean;
    vars[static_cast<std::size_t>(m)] = (col.array() - mean).square().sum() / (nd - 1.0);
  }
  const double d_mean = std::abs(means[0] - mu);
  const double d_var = std::abs(vars[0] - sigma2);
  const double tiny = 1e-14;
  if (d_mean <= tiny * std::max(1.0, std::abs(mu)) || d_var <= tiny * sigma2)
    throw RateUndefined("initial state already matches the target moments");

  for (Index m = 0; m < steps; ++m) {
    const double mean = means[static_cast<std::size_t>(m)];
    const double var = vars[static_cast<std::size_t>(m)];
    const double dm = std::abs(mean - mu);
    const double dv = std::abs(var - sigma2);
    out.mean_ratio.push_back(dm / d_mean);
    out.variance_ratio.push_back(dv / d_var);
    // standard errors of the sample mean and sample variance across chains
    const double se_mean = std::sqrt(var / nd);
    const double se_var = var * std::sqrt(2.0 / (nd - 1.0));
    const double inf = std::numeric_limits<double>::infinity();
    out.mean_rel_error.push_back(m == 0 ? 0.0 : (dm > 0.0 ? se_mean / dm : inf));
    out.variance_rel_error.push_back(m == 0 ? 0.0 : (dv > 0.0 ? se_var / dv : inf));
  }
  return out;
}

int convergence_rate_step(std::span<const double> rel_errors, double max_rel_error) {
  int best = 1;
  for (std::size_t m = 1; m < rel_errors.size(); ++m)
    if (rel_errors[m] <= max_rel_error)
      best = static_cast<int>(m);
  return best;
}

double convergence_rate(std::span<const double> ratios, std::span<const double> rel_errors,
                        double max_rel_error) {
  if (ratios.size() < 2 || rel_errors.size() != ratios.size())
    throw InvalidArgument("convergence_rate: need ratios for m = 0..m_max with m_max >= 1");
  const int m = convergence_rate_step(rel_errors, max_rel_error);
  return std::pow(ratios[static_cast<std::size_t>(m)], 1.0 / m);
}

std::vector<double> rmse_curve(const DenseMatrix &chains, double mu,
                               std::span<const Index> lengths) {
  std::vector<double> out;
  const Index n = chains.rows();
  if (n < 1)
    throw InvalidArgument("rmse_curve: no chains");
  for (const Index len : lengths) {
    if (len < 1 || len > chains.cols())
      throw InvalidArgument("rmse_curve: length out of range");
    double s = 0.0;
    for (Index j = 0; j < n; ++j) {
      const double est = chains.row(j).head(len).mean();
      s += (mu - est) * (mu - est);
    }
    out.push_back(std::sqrt(s / static_cast<double>(n)));
  }
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidArgument("loglog_slope: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw InvalidArgument("loglog_slope: values must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace mgmc
