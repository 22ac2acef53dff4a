#pragma once

#include "mgmc/bayes.hpp"
#include "mgmc/samplers.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mgmc {

/// Streaming sample mean and covariance. Samples are shifted by a fixed
/// centre before accumulation to avoid cancellation.
class MomentAccumulator {
public:
  explicit MomentAccumulator(Vector centre);

  void add(const Vector &x);
  Index count() const { return count_; }
  Vector mean() const;
  /// Unbiased (N - 1) sample covariance.
  DenseMatrix covariance() const;

private:
  Vector centre_;
  Vector sum_;
  DenseMatrix outer_;
  Index count_ = 0;
};

/// Largest |estimate - target| / sigma_MC over all mean components and all
/// covariance entries, with Gaussian standard errors sqrt(S_ii / N) and
/// sqrt((S_ii S_jj + S_ij^2) / N) computed from the target covariance S.
struct MomentComparison {
  double max_mean_z = 0.0;
  double max_cov_z = 0.0;
  bool within(double k) const { return max_mean_z <= k && max_cov_z <= k; }
};

MomentComparison compare_moments(const MomentAccumulator &acc, const Vector &mean,
                                 const DenseMatrix &cov);

/// 2D posterior on a grid with `cells` cells per side and beta observations
/// whose balls each contain a single vertex, so that coarse desk-size grids
/// are admissible. Values and variances follow the usual synthetic ranges.
PosteriorProblem desk_posterior(Index cells, Index beta,
                                OperatorKind kind = OperatorKind::shifted_laplace_fem,
                                double kappa_sq = 100.0, std::optional<int> coarsenings = {});

/// Prior-only problem with a deterministic non-zero right-hand side.
PosteriorProblem desk_prior(Index cells, OperatorKind kind = OperatorKind::shifted_laplace_fem,
                            double kappa_sq = 100.0, std::optional<int> coarsenings = {});

struct CheckResult {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 7;
  Index chains = 20000;
  bool broken_splitting = false;
};

std::vector<CheckResult> run_verification(const VerifyOptions &options);
nlohmann::json verification_report(const std::vector<CheckResult> &checks);

} // namespace mgmc
