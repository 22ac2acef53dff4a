#pragma once

#include "mgmc/bayes.hpp"
#include "mgmc/config.hpp"
#include "mgmc/samplers.hpp"
#include "mgmc/stats.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace mgmc {

std::string library_version();

struct ProblemSetup {
  std::shared_ptr<const PosteriorProblem> problem;
  ObservationSet observations;
  Vector qoi;
  double setup_seconds = 0.0;
};

/// Grid, hierarchy, observations and QoI described by a config; `cells`
/// overrides problem.cells. Synthetic observations depend only on the seed.
ProblemSetup build_problem(const RunConfig &config, std::optional<Index> cells = {});

std::unique_ptr<Sampler> make_sampler(const std::string &kind, const RunConfig &config,
                                      std::shared_ptr<const PosteriorProblem> problem);

/// Mean F^T Ã^{-1} f and variance F^T Ã^{-1} F of the QoI under the target,
/// from a sparse Cholesky factorisation of Ã_L.
struct ReferenceMoments {
  double mean = 0.0;
  double variance = 0.0;
};
ReferenceMoments reference_moments(const PosteriorProblem &problem, const Vector &qoi);

/// Runs body(j, sampler, rng) for chains j = 0..count-1 on `threads` workers.
/// Chain j always gets RngStream(seed, first_stream + j) and a private clone
/// of prototype, so results do not depend on the number of workers.
void for_each_chain(const Sampler &prototype, Index count, int threads, std::uint64_t seed,
                    std::uint64_t first_stream,
                    const std::function<void(Index, Sampler &, RngStream &)> &body);

/// Applies `steps` updates and returns z after each of them.
std::vector<double> run_chain(Sampler &sampler, const Vector &qoi, Vector &theta, Index steps,
                              RngStream &rng);

struct RunRecord {
  std::string command;
  std::string config_hash;
  std::string version;
  std::string rng;
  std::uint64_t seed = 0;
  nlohmann::json timings = nlohmann::json::object();
  nlohmann::json outputs = nlohmann::json::object();

  nlohmann::json to_json() const;
};

/// Each command writes its CSV files plus run.json into `out` and returns the
/// record it wrote.
RunRecord cmd_sample(const RunConfig &config, const std::filesystem::path &out);
RunRecord cmd_performance(const RunConfig &config, const std::filesystem::path &out);
RunRecord cmd_convergence(const RunConfig &config, const std::filesystem::path &out);
RunRecord cmd_autocorrelation(const RunConfig &config, const std::filesystem::path &out);
RunRecord cmd_rmse(const RunConfig &config, const std::filesystem::path &out);

} // namespace mgmc
