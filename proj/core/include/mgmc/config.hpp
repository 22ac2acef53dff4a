#pragma once

#include "mgmc/discretise.hpp"
#include "mgmc/samplers.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mgmc {

inline constexpr int kConfigVersion = 1;

struct ProblemConfig {
  int dimension = 2;
  Index cells = 32;
  OperatorKind op = OperatorKind::shifted_laplace_fem;
  double kappa_sq = 100.0;
  std::optional<int> coarsenings; ///< all available when unset
};

enum class ObservationSource { none, synthetic, file };

struct ObservationConfig {
  ObservationSource source = ObservationSource::synthetic;
  std::string file;
  Index count = 8;
  double radius = 0.025;
  std::array<double, 2> value_range{1.0, 4.0};
  std::array<double, 2> variance_range{1e-6, 2e-6};
};

struct QoiConfig {
  std::array<double, 3> centre{0.5, 0.5, 0.5};
  double radius = 0.025;
};

struct SamplerConfig {
  std::string kind = "mgmc"; ///< mgmc | gibbs | cholesky
  CycleParams cycle;
  int gibbs_sweeps = 1;
};

struct ExperimentConfig {
  Index steps = 10000;
  Index warmup = 1000;
  Index chains = 100;
  std::vector<Index> grids;             ///< empty: use problem.cells
  std::vector<std::string> samplers;    ///< empty: use sampler.kind
  std::vector<Index> lengths;           ///< rmse: chain lengths M
  Index max_lag = 100;                  ///< autocorrelation output
  double wolff_s = 1.5;
  double max_rel_error = 0.1;
  Index timing_updates = 0;             ///< performance: extra timed updates (0: use steps)
  bool write_states = false;
};

/// Complete run description. Serialised as JSON; unknown keys are rejected.
struct RunConfig {
  int version = kConfigVersion;
  std::uint64_t seed = 20240501;
  int threads = 1;
  std::string output = "mgmc-out";
  ProblemConfig problem;
  ObservationConfig observations;
  QoiConfig qoi;
  SamplerConfig sampler;
  ExperimentConfig experiment;
};

RunConfig config_from_json(const nlohmann::json &j);
nlohmann::json config_to_json(const RunConfig &c);
RunConfig load_config(const std::filesystem::path &path);

/// FNV-1a 64-bit hash of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig &c);

} // namespace mgmc
