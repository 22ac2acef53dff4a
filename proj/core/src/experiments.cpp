#include "mgmc/experiments.hpp"

#include "mgmc/cholesky.hpp"
#include "mgmc/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <thread>

#ifndef MGMC_VERSION
#define MGMC_VERSION "0.0.0"
#endif

namespace mgmc {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string library_version() { return MGMC_VERSION; }

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::ofstream open_output(const fs::path &path) {
  std::ofstream out(path);
  if (!out)
    throw ConfigError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

void write_record(const RunRecord &record, const fs::path &out) {
  auto f = open_output(out / "run.json");
  f << record.to_json().dump(2) << '\n';
}

RunRecord make_record(const std::string &command, const RunConfig &config) {
  RunRecord r;
  r.command = command;
  r.config_hash = config_hash(config);
  r.version = library_version();
  r.rng = RngStream::algorithm();
  r.seed = config.seed;
  return r;
}

std::vector<Index> grids_of(const RunConfig &config) {
  if (config.experiment.grids.empty())
    return {config.problem.cells};
  return config.experiment.grids;
}

std::vector<std::string> samplers_of(const RunConfig &config) {
  if (config.experiment.samplers.empty())
    return {config.sampler.kind};
  return config.experiment.samplers;
}

std::vector<Index> default_lengths(Index max_len) {
  std::vector<Index> out;
  for (Index decade = 1; decade <= max_len; decade *= 10)
    for (const Index k : {1, 2, 5})
      if (k * decade <= max_len)
        out.push_back(k * decade);
  if (out.empty() || out.back() != max_len)
    out.push_back(max_len);
  return out;
}

} // namespace

ProblemSetup build_problem(const RunConfig &config, std::optional<Index> cells) {
  const auto t0 = Clock::now();
  const int d = config.problem.dimension;
  const Grid grid(d, cells.value_or(config.problem.cells));
  ProblemSetup setup;
  switch (config.observations.source) {
  case ObservationSource::none:
    setup.observations.radius = config.observations.radius;
    break;
  case ObservationSource::synthetic:
    setup.observations = synthesise_observations(
        d, config.observations.count, config.observations.radius,
        config.observations.value_range, config.observations.variance_range, config.seed);
    break;
  case ObservationSource::file:
    setup.observations =
        read_observations_csv(config.observations.file, d, config.observations.radius);
    break;
  }
  const SparseMatrix b = ball_average_rows(grid, setup.observations);
  Hierarchy h = build_hierarchy(grid, OperatorSpec{config.problem.op, config.problem.kappa_sq},
                                b, config.problem.coarsenings);
  setup.problem = std::make_shared<const PosteriorProblem>(
      std::move(h), NoiseCovariance::diagonal(setup.observations.variances),
      setup.observations.values);
  setup.qoi = qoi_vector(grid, config.qoi.centre, config.qoi.radius);
  setup.setup_seconds = seconds_since(t0);
  return setup;
}

std::unique_ptr<Sampler> make_sampler(const std::string &kind, const RunConfig &config,
                                      std::shared_ptr<const PosteriorProblem> problem) {
  if (kind == "mgmc")
    return std::make_unique<MgmcSampler>(std::move(problem), config.sampler.cycle);
  if (kind == "gibbs")
    return std::make_unique<GibbsSampler>(std::move(problem), config.sampler.gibbs_sweeps,
                                          config.sampler.cycle.omega);
  if (kind == "cholesky")
    return std::make_unique<CholeskySampler>(std::move(problem));
  throw ConfigError("unknown sampler '" + kind + "'");
}

ReferenceMoments reference_moments(const PosteriorProblem &problem, const Vector &qoi) {
  const TriangularFactor factor = sparse_cholesky(problem.assemble_precision(problem.finest()));
  ReferenceMoments m;
  m.mean = qoi.dot(factor.solve(problem.rhs()));
  m.variance = qoi.dot(factor.solve(qoi));
  return m;
}

void for_each_chain(const Sampler &prototype, Index count, int threads, std::uint64_t seed,
                    std::uint64_t first_stream,
                    const std::function<void(Index, Sampler &, RngStream &)> &body) {
  const int workers = static_cast<int>(std::max<Index>(1, std::min<Index>(threads, count)));
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    auto sampler = prototype.clone();
    for (;;) {
      const Index j = next.fetch_add(1);
      if (j >= count)
        return;
      try {
        RngStream rng(seed, first_stream + static_cast<std::uint64_t>(j));
        body(j, *sampler, rng);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
        next = count;
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back(work);
    for (auto &t : pool)
      t.join();
  }
  if (failure)
    std::rethrow_exception(failure);
}

std::vector<double> run_chain(Sampler &sampler, const Vector &qoi, Vector &theta, Index steps,
                              RngStream &rng) {
  std::vector<double> z;
  z.reserve(static_cast<std::size_t>(steps));
  for (Index m = 0; m < steps; ++m) {
    sampler.update(theta, rng);
    z.push_back(qoi.dot(theta));
  }
  return z;
}

json RunRecord::to_json() const {
  return {{"command", command}, {"config_hash", config_hash}, {"version", version},
          {"rng", rng},         {"seed", seed},               {"timings", timings},
          {"outputs", outputs}};
}

RunRecord cmd_sample(const RunConfig &config, const fs::path &out) {
  fs::create_directories(out);
  RunRecord record = make_record("sample", config);
  const ProblemSetup setup = build_problem(config);
  const auto t0 = Clock::now();
  auto sampler = make_sampler(config.sampler.kind, config, setup.problem);
  record.timings["problem_setup_s"] = setup.setup_seconds;
  record.timings["sampler_setup_s"] = seconds_since(t0);

  RngStream rng(config.seed, 0);
  Vector theta = Vector::Zero(setup.problem->size(setup.problem->finest()));
  auto series = open_output(out / "series.csv");
  series << "step,z\n";
  std::ofstream states;
  if (config.experiment.write_states) {
    states = open_output(out / "states.csv");
    states << "step,index,value\n";
  }
  const auto t1 = Clock::now();
  for (Index m = 1; m <= config.experiment.steps; ++m) {
    sampler->update(theta, rng);
    series << m << ',' << setup.qoi.dot(theta) << '\n';
    if (config.experiment.write_states)
      for (Index i = 0; i < theta.size(); ++i)
        states << m << ',' << i << ',' << theta[i] << '\n';
  }
  const double elapsed = seconds_since(t1);
  record.timings["seconds_per_update"] = elapsed / static_cast<double>(config.experiment.steps);
  record.outputs = {{"sampler", sampler->name()},
                    {"steps", config.experiment.steps},
                    {"unknowns", theta.size()},
                    {"observations", setup.problem->beta()},
                    {"series", "series.csv"}};
  write_record(record, out);
  return record;
}

RunRecord cmd_performance(const RunConfig &config, const fs::path &out) {
  fs::create_directories(out);
  RunRecord record = make_record("performance", config);
  auto table = open_output(out / "performance.csv");
  table << "sampler,grid,unknowns,iact,iact_stderr,window,iact_reliable,setup_s,"
           "time_per_sample_ms,time_per_independent_sample_ms\n";
  json rows = json::array();
  for (const Index cells : grids_of(config)) {
    const ProblemSetup setup = build_problem(config, cells);
    const Index n = setup.problem->size(setup.problem->finest());
    for (const auto &kind : samplers_of(config)) {
      const auto t0 = Clock::now();
      auto sampler = make_sampler(kind, config, setup.problem);
      const double setup_s = seconds_since(t0);
      RngStream rng(config.seed, 0);
      Vector theta = Vector::Zero(n);
      run_chain(*sampler, setup.qoi, theta, config.experiment.warmup, rng);
      const auto t1 = Clock::now();
      const auto z = run_chain(*sampler, setup.qoi, theta, config.experiment.steps, rng);
      const double per_sample = seconds_since(t1) / static_cast<double>(config.experiment.steps);

      IactEstimate est;
      bool reliable = true;
      if (kind != "cholesky") {
        try {
          est = iact_wolff(z, config.experiment.wolff_s);
        } catch (const UnreliableIact &) {
          reliable = false;
          est.tau = std::nan("");
          est.stderr_ = std::nan("");
        }
      }
      const double per_indep = per_sample * est.tau;
      table << kind << ',' << cells << ',' << n << ',' << est.tau << ',' << est.stderr_ << ','
            << est.window << ',' << (reliable ? 1 : 0) << ',' << setup_s << ','
            << per_sample * 1e3 << ',' << per_indep * 1e3 << '\n';
      rows.push_back({{"sampler", kind},
                      {"grid", cells},
                      {"iact", reliable ? json(est.tau) : json()},
                      {"iact_stderr", reliable ? json(est.stderr_) : json()},
                      {"iact_reliable", reliable},
                      {"setup_s", setup_s},
                      {"time_per_sample_ms", per_sample * 1e3}});
    }
  }
  record.outputs = {{"table", "performance.csv"}, {"rows", rows}};
  write_record(record, out);
  return record;
}

RunRecord cmd_convergence(const RunConfig &config, const fs::path &out) {
  fs::create_directories(out);
  RunRecord record = make_record("convergence", config);
  auto ratios_csv = open_output(out / "ratios.csv");
  ratios_csv << "sampler,grid,m,mean_ratio,variance_ratio,mean_rel_error,variance_rel_error\n";
  auto rates_csv = open_output(out / "rates.csv");
  rates_csv << "sampler,grid,rho,zeta,m_star_mean,m_star_variance\n";
  json rates = json::array();
  const Index steps = config.experiment.steps;
  const Index chains = config.experiment.chains;
  for (const Index cells : grids_of(config)) {
    const ProblemSetup setup = build_problem(config, cells);
    const ReferenceMoments ref = reference_moments(*setup.problem, setup.qoi);
    const Index n = setup.problem->size(setup.problem->finest());
    for (const auto &kind : samplers_of(config)) {
      auto sampler = make_sampler(kind, config, setup.problem);
      DenseMatrix z(chains, steps + 1);
      for_each_chain(*sampler, chains, config.threads, config.seed, 0,
                     [&](Index j, Sampler &s, RngStream &rng) {
                       Vector theta = Vector::Zero(n);
                       z(j, 0) = setup.qoi.dot(theta);
                       const auto series = run_chain(s, setup.qoi, theta, steps, rng);
                       for (Index m = 0; m < steps; ++m)
                         z(j, m + 1) = series[static_cast<std::size_t>(m)];
                     });
      const ConvergenceRatios r = convergence_ratios(z, ref.mean, ref.variance);
      for (Index m = 0; m <= steps; ++m) {
        const auto k = static_cast<std::size_t>(m);
        ratios_csv << kind << ',' << cells << ',' << m << ',' << r.mean_ratio[k] << ','
                   << r.variance_ratio[k] << ',' << r.mean_rel_error[k] << ','
                   << r.variance_rel_error[k] << '\n';
      }
      const double e = config.experiment.max_rel_error;
      const double rho = convergence_rate(r.mean_ratio, r.mean_rel_error, e);
      const double zeta = convergence_rate(r.variance_ratio, r.variance_rel_error, e);
      const int ms_r = convergence_rate_step(r.mean_rel_error, e);
      const int ms_z = convergence_rate_step(r.variance_rel_error, e);
      rates_csv << kind << ',' << cells << ',' << rho << ',' << zeta << ',' << ms_r << ','
                << ms_z << '\n';
      rates.push_back({{"sampler", kind},
                       {"grid", cells},
                       {"rho", rho},
                       {"zeta", zeta},
                       {"reference_mean", ref.mean},
                       {"reference_variance", ref.variance}});
    }
  }
  record.outputs = {{"ratios", "ratios.csv"}, {"rates", rates}};
  write_record(record, out);
  return record;
}

RunRecord cmd_autocorrelation(const RunConfig &config, const fs::path &out) {
  fs::create_directories(out);
  RunRecord record = make_record("autocorrelation", config);
  auto csv = open_output(out / "autocorrelation.csv");
  csv << "sampler,grid,t,rho\n";
  json results = json::array();
  for (const Index cells : grids_of(config)) {
    const ProblemSetup setup = build_problem(config, cells);
    const Index n = setup.problem->size(setup.problem->finest());
    for (const auto &kind : samplers_of(config)) {
      auto sampler = make_sampler(kind, config, setup.problem);
      RngStream rng(config.seed, 0);
      Vector theta = Vector::Zero(n);
      run_chain(*sampler, setup.qoi, theta, config.experiment.warmup, rng);
      const auto z = run_chain(*sampler, setup.qoi, theta, config.experiment.steps, rng);
      const double g0 = autocorrelation(z, 0);
      const Index max_lag = std::min<Index>(config.experiment.max_lag,
                                            static_cast<Index>(z.size()) - 1);
      for (Index t = 0; t <= max_lag; ++t)
        csv << kind << ',' << cells << ',' << t << ','
            << (g0 > 0.0 ? autocorrelation(z, t) / g0 : 0.0) << '\n';
      json entry = {{"sampler", kind}, {"grid", cells}};
      try {
        const IactEstimate e = iact_wolff(z, config.experiment.wolff_s);
        entry["iact"] = e.tau;
        entry["iact_stderr"] = e.stderr_;
        entry["window"] = e.window;
        entry["iact_reliable"] = true;
      } catch (const UnreliableIact &) {
        entry["iact_reliable"] = false;
      }
      results.push_back(entry);
    }
  }
  record.outputs = {{"autocorrelation", "autocorrelation.csv"}, {"iact", results}};
  write_record(record, out);
  return record;
}

RunRecord cmd_rmse(const RunConfig &config, const fs::path &out) {
  fs::create_directories(out);
  RunRecord record = make_record("rmse", config);
  auto csv = open_output(out / "rmse.csv");
  csv << "sampler,grid,M,rmse\n";
  const Index steps = config.experiment.steps;
  const Index chains = config.experiment.chains;
  const std::vector<Index> lengths =
      config.experiment.lengths.empty() ? default_lengths(steps) : config.experiment.lengths;
  json curves = json::array();
  for (const Index cells : grids_of(config)) {
    const ProblemSetup setup = build_problem(config, cells);
    const ReferenceMoments ref = reference_moments(*setup.problem, setup.qoi);
    const Index n = setup.problem->size(setup.problem->finest());
    for (const auto &kind : samplers_of(config)) {
      auto sampler = make_sampler(kind, config, setup.problem);
      DenseMatrix z(chains, steps);
      for_each_chain(*sampler, chains, config.threads, config.seed, 0,
                     [&](Index j, Sampler &s, RngStream &rng) {
                       Vector theta = Vector::Zero(n);
                       const auto series = run_chain(s, setup.qoi, theta, steps, rng);
                       for (Index m = 0; m < steps; ++m)
                         z(j, m) = series[static_cast<std::size_t>(m)];
                     });
      const auto curve = rmse_curve(z, ref.mean, lengths);
      for (std::size_t i = 0; i < lengths.size(); ++i)
        csv << kind << ',' << cells << ',' << lengths[i] << ',' << curve[i] << '\n';
      curves.push_back({{"sampler", kind}, {"grid", cells}, {"lengths", lengths}, {"rmse", curve}});
    }
  }
  record.outputs = {{"rmse", "rmse.csv"}, {"curves", curves}};
  write_record(record, out);
  return record;
}

} // namespace mgmc
