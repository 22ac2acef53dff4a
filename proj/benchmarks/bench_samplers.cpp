#include "mgmc/config.hpp"
#include "mgmc/experiments.hpp"
#include "mgmc/samplers.hpp"
#include "mgmc/sparse.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <string>

namespace {

// Problems are cached per grid size so setup stays out of the timed region.
const mgmc::ProblemSetup &setup_for(mgmc::Index cells) {
  static std::map<mgmc::Index, mgmc::ProblemSetup> cache;
  auto it = cache.find(cells);
  if (it == cache.end()) {
    mgmc::RunConfig c;
    c.problem.cells = cells;
    it = cache.emplace(cells, mgmc::build_problem(c)).first;
  }
  return it->second;
}

void run_sampler(benchmark::State &state, const std::string &kind, mgmc::CycleShape shape) {
  const auto cells = static_cast<mgmc::Index>(state.range(0));
  const auto &setup = setup_for(cells);
  mgmc::RunConfig c;
  c.problem.cells = cells;
  c.sampler.cycle.shape = shape;
  auto sampler = mgmc::make_sampler(kind, c, setup.problem);
  mgmc::Vector theta = mgmc::Vector::Zero(setup.problem->size(setup.problem->finest()));
  mgmc::RngStream rng(1, 0);
  for (auto _ : state) {
    sampler->update(theta, rng);
    benchmark::DoNotOptimize(theta.data());
  }
  state.counters["unknowns"] = static_cast<double>(theta.size());
  state.SetComplexityN(theta.size());
}

void BM_MgmcV(benchmark::State &state) { run_sampler(state, "mgmc", mgmc::CycleShape::v); }
void BM_MgmcW(benchmark::State &state) { run_sampler(state, "mgmc", mgmc::CycleShape::w); }
void BM_GibbsSweep(benchmark::State &state) { run_sampler(state, "gibbs", mgmc::CycleShape::v); }
void BM_CholeskyDraw(benchmark::State &state) { run_sampler(state, "cholesky", mgmc::CycleShape::v); }

void BM_Spmv(benchmark::State &state) {
  const auto cells = static_cast<mgmc::Index>(state.range(0));
  const auto &p = *setup_for(cells).problem;
  const mgmc::SparseMatrix &a = p.level(p.finest()).precision;
  const mgmc::Vector x = mgmc::Vector::Ones(a.cols());
  mgmc::Vector y(a.rows());
  for (auto _ : state) {
    a.multiply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetBytesProcessed(state.iterations() * a.nnz() * 12);
  state.SetComplexityN(a.rows());
}

} // namespace

BENCHMARK(BM_MgmcV)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oN);
BENCHMARK(BM_MgmcW)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oN);
BENCHMARK(BM_GibbsSweep)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oN);
BENCHMARK(BM_CholeskyDraw)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_Spmv)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMicrosecond)->Complexity(benchmark::oN);
BENCHMARK_MAIN();
