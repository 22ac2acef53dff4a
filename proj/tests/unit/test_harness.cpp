#include "mgmc/config.hpp"
#include "mgmc/errors.hpp"
#include "mgmc/experiments.hpp"
#include "mgmc/verify.hpp"

#include <doctest.h>

#include <Eigen/Cholesky>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mgmc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / ("mgmc_unit_" + name);
  fs::remove_all(p);
  return p;
}

RunConfig small_config() {
  RunConfig c;
  c.seed = 123;
  c.problem.cells = 16;
  c.observations.count = 4;
  c.observations.radius = 0.1;
  c.qoi.radius = 0.1;
  c.experiment.steps = 300;
  c.experiment.warmup = 10;
  c.experiment.chains = 6;
  return c;
}

} // namespace

TEST_CASE("config round trip and hashing") {
  const RunConfig c = small_config();
  const RunConfig back = config_from_json(config_to_json(c));
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_to_json(back) == config_to_json(c));

  RunConfig other = c;
  other.threads = 4;
  other.output = "elsewhere";
  CHECK(config_hash(other) == config_hash(c));
  other.seed = 124;
  CHECK(config_hash(other) != config_hash(c));
  CHECK(config_hash(c).size() == 16);
}

TEST_CASE("config validation") {
  using nlohmann::json;
  CHECK_THROWS_AS(config_from_json(json{{"problem", {{"cells", 8}, {"kapa_sq", 1.0}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"colour", "red"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"version", 2}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"problem", {{"operator", "laplace"}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"sampler", {{"omega", 2.5}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"sampler", {{"kind", "hmc"}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"problem", {{"cells", "many"}}}}), ConfigError);
  const RunConfig c = config_from_json(json{{"sampler", {{"cycle", "w"}, {"coarse", "cholesky"}}}});
  CHECK(c.sampler.cycle.shape == CycleShape::w);
  CHECK(c.sampler.cycle.coarse == CoarseMode::cholesky);
}

TEST_CASE("config files may contain comments") {
  const fs::path dir = scratch_dir("config");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << "{\n  // coarse grid\n  \"problem\": {\"cells\": 8}\n}\n";
  CHECK(load_config(dir / "c.json").problem.cells == 8);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("moment accumulator and z-scores") {
  MomentAccumulator acc(Vector::Constant(2, 10.0));
  const double xs[4][2] = {{1, 2}, {3, 0}, {5, 4}, {7, 2}};
  for (const auto &x : xs)
    acc.add(Eigen::Vector2d(x[0], x[1]));
  CHECK(acc.count() == 4);
  CHECK(acc.mean()[0] == doctest::Approx(4.0));
  CHECK(acc.mean()[1] == doctest::Approx(2.0));
  const DenseMatrix cov = acc.covariance();
  CHECK(cov(0, 0) == doctest::Approx(20.0 / 3.0));
  CHECK(cov(0, 1) == doctest::Approx(4.0 / 3.0));
  CHECK(cov(1, 1) == doctest::Approx(8.0 / 3.0));

  // target mean (4, 2) and identity covariance: mean z = 0, cov z from sqrt(2/N) or sqrt(1/N)
  const MomentComparison cmp = compare_moments(acc, Eigen::Vector2d(4.0, 2.0), DenseMatrix::Identity(2, 2));
  CHECK(cmp.max_mean_z == doctest::Approx(0.0));
  CHECK(cmp.max_cov_z == doctest::Approx((20.0 / 3.0 - 1.0) / std::sqrt(2.0 / 4.0)));
  CHECK_FALSE(cmp.within(4.0));
}

TEST_CASE("reference moments come from the exact posterior") {
  const RunConfig c = small_config();
  const ProblemSetup setup = build_problem(c);
  const DenseMatrix a = setup.problem->dense_precision(setup.problem->finest());
  const Vector mean = a.llt().solve(setup.problem->rhs());
  const ReferenceMoments ref = reference_moments(*setup.problem, setup.qoi);
  CHECK(ref.mean == doctest::Approx(setup.qoi.dot(mean)));
  CHECK(ref.variance == doctest::Approx(setup.qoi.dot(a.llt().solve(setup.qoi))));
}

TEST_CASE("chain results do not depend on the number of workers") {
  const RunConfig c = small_config();
  const ProblemSetup setup = build_problem(c);
  const auto proto = make_sampler("mgmc", c, setup.problem);
  auto run = [&](int threads) {
    std::vector<double> last(6);
    for_each_chain(*proto, 6, threads, c.seed, 100, [&](Index j, Sampler &s, RngStream &rng) {
      Vector theta = Vector::Zero(setup.qoi.size());
      last[static_cast<std::size_t>(j)] = run_chain(s, setup.qoi, theta, 20, rng).back();
    });
    return last;
  };
  CHECK(run(1) == run(3));
}

TEST_CASE("sample command is bitwise reproducible") {
  const RunConfig c = small_config();
  const fs::path a = scratch_dir("sample_a"), b = scratch_dir("sample_b");
  const RunRecord ra = cmd_sample(c, a);
  cmd_sample(c, b);
  CHECK(slurp(a / "series.csv") == slurp(b / "series.csv"));
  CHECK(ra.config_hash == config_hash(c));
  CHECK(fs::exists(a / "run.json"));
  RunConfig d = c;
  d.seed = 124;
  const fs::path e = scratch_dir("sample_c");
  cmd_sample(d, e);
  CHECK(slurp(a / "series.csv") != slurp(e / "series.csv"));
  for (const auto &p : {a, b, e})
    fs::remove_all(p);
}

TEST_CASE("performance table has one schema for every sampler") {
  RunConfig c = small_config();
  c.experiment.samplers = {"mgmc", "gibbs", "cholesky"};
  c.experiment.grids = {8, 16};
  c.observations.radius = 0.13;
  c.qoi.radius = 0.13;
  const fs::path out = scratch_dir("performance");
  cmd_performance(c, out);
  std::ifstream in(out / "performance.csv");
  std::string header, line;
  std::getline(in, header);
  const auto columns = std::count(header.begin(), header.end(), ',');
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == columns);
    ++rows;
  }
  CHECK(rows == 6);
  fs::remove_all(out);
}

TEST_CASE("convergence, autocorrelation and rmse commands write their tables") {
  RunConfig c = small_config();
  c.experiment.steps = 120;
  c.experiment.chains = 20;
  c.experiment.lengths = {10, 50, 120};
  const fs::path out = scratch_dir("commands");
  cmd_convergence(c, out);
  cmd_autocorrelation(c, out);
  cmd_rmse(c, out);
  for (const char *f : {"ratios.csv", "rates.csv", "autocorrelation.csv", "rmse.csv"})
    CHECK(fs::file_size(out / f) > 0);
  fs::remove_all(out);
}

TEST_CASE("verification reports a broken splitting") {
  VerifyOptions opt;
  opt.chains = 500;
  opt.broken_splitting = true;
  const auto checks = run_verification(opt);
  bool found = false;
  for (const auto &c : checks)
    if (c.name == "random_smoother_splitting") {
      found = true;
      CHECK_FALSE(c.pass);
    }
  CHECK(found);
  CHECK_FALSE(verification_report(checks).at("passed").get<bool>());
}
