#include "mgmc/config.hpp"
#include "mgmc/errors.hpp"
#include "mgmc/experiments.hpp"
#include "mgmc/verify.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
};

void add_common(CLI::App *cmd, CommonOptions &o, bool config_required) {
  auto *c = cmd->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  if (config_required)
    c->required();
  cmd->add_option("--seed", o.seed, "override the configured seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--threads", o.threads, "worker threads for independent chains")
      ->check(CLI::PositiveNumber);
}

mgmc::RunConfig resolve(const CommonOptions &o) {
  mgmc::RunConfig c = o.config.empty() ? mgmc::RunConfig{} : mgmc::load_config(o.config);
  if (o.seed)
    c.seed = *o.seed;
  if (o.out)
    c.output = *o.out;
  if (o.threads)
    c.threads = *o.threads;
  return c;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Multigrid Monte Carlo sampling of Gaussian random fields"};
  app.set_version_flag("--version", mgmc::library_version());
  app.require_subcommand(1);

  CommonOptions opts;
  using Command = mgmc::RunRecord (*)(const mgmc::RunConfig &, const fs::path &);
  const std::pair<const char *, std::pair<const char *, Command>> commands[] = {
      {"sample", {"run one chain and write the QoI series", mgmc::cmd_sample}},
      {"performance", {"IACT and cost per sample for each sampler and grid", mgmc::cmd_performance}},
      {"convergence", {"convergence ratios and rates from many chains", mgmc::cmd_convergence}},
      {"autocorrelation", {"autocorrelation function and IACT of one chain", mgmc::cmd_autocorrelation}},
      {"rmse", {"RMSE of the QoI estimator against chain length", mgmc::cmd_rmse}},
  };
  std::vector<std::pair<CLI::App *, Command>> runners;
  for (const auto &[name, entry] : commands) {
    auto *sub = app.add_subcommand(name, entry.first);
    add_common(sub, opts, true);
    runners.emplace_back(sub, entry.second);
  }

  auto *verify = app.add_subcommand("verify", "run the oracle and invariance checks");
  add_common(verify, opts, false);
  mgmc::VerifyOptions vopt;
  verify->add_option("--chains", vopt.chains, "chains for the moment tests")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--broken-splitting", vopt.broken_splitting,
                   "use an indefinite splitting to exercise the failure path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      const mgmc::RunConfig c = resolve(opts);
      vopt.seed = c.seed;
      const auto checks = mgmc::run_verification(vopt);
      const auto report = mgmc::verification_report(checks);
      const std::string text = report.dump(2);
      if (opts.out) {
        fs::create_directories(*opts.out);
        std::ofstream(fs::path(*opts.out) / "verify.json") << text << '\n';
      }
      std::cout << text << '\n';
      return report.at("passed").get<bool>() ? 0 : 1;
    }
    for (const auto &[sub, run] : runners) {
      if (!sub->parsed())
        continue;
      const mgmc::RunConfig c = resolve(opts);
      const mgmc::RunRecord record = run(c, c.output);
      std::cout << record.to_json().dump(2) << '\n';
    }
  } catch (const mgmc::Error &e) {
    std::cerr << "mgmc: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
