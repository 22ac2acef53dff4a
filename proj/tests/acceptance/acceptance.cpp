// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: mgmc_acceptance [criterion numbers...]

#include "mgmc/cholesky.hpp"
#include "mgmc/config.hpp"
#include "mgmc/dense.hpp"
#include "mgmc/errors.hpp"
#include "mgmc/experiments.hpp"
#include "mgmc/oracle.hpp"
#include "mgmc/samplers.hpp"
#include "mgmc/stats.hpp"
#include "mgmc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace mgmc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::shared_ptr<const PosteriorProblem> shared(PosteriorProblem p) {
  return std::make_shared<const PosteriorProblem>(std::move(p));
}

// Lower-level sampler built from a single low-rank Gibbs sweep (or a
// symmetric pair) on the finest level.
class SweepSampler final : public Sampler {
public:
  enum class Kind { forward, backward, symmetric };
  SweepSampler(std::shared_ptr<const PosteriorProblem> p, Kind kind)
      : problem_(std::move(p)), kind_(kind) {
    const auto all = precompute_smoothers(*problem_, 1.0);
    smoothers_ = std::make_shared<const LevelSmoothers>(all.back());
  }
  void update(Vector &theta, RngStream &rng) override {
    const int l = problem_->finest();
    if (kind_ == Kind::symmetric)
      symmetric_gibbs_step(*problem_, l, smoothers_->forward, smoothers_->backward, problem_->rhs(),
                           theta, rng, ws_);
    else
      gibbs_lowrank_step(*problem_, l,
                         kind_ == Kind::forward ? smoothers_->forward : smoothers_->backward,
                         problem_->rhs(), theta, rng, ws_);
  }
  std::string name() const override {
    return kind_ == Kind::forward ? "gibbs-fwd" : kind_ == Kind::backward ? "gibbs-bwd" : "gibbs-sym";
  }
  std::unique_ptr<Sampler> clone() const override { return std::make_unique<SweepSampler>(*this); }
  const PosteriorProblem &problem() const override { return *problem_; }

private:
  std::shared_ptr<const PosteriorProblem> problem_;
  Kind kind_;
  std::shared_ptr<const LevelSmoothers> smoothers_;
  SweepWorkspace ws_;
};

// ---------------------------------------------------------------------------

Outcome invariance_suite() {
  const auto t0 = Clock::now();
  const Index chains = 100000;
  const auto p = shared(desk_posterior(8, 2));
  const int l = p->finest();
  const DenseMatrix cov = spd_inverse(p->dense_precision(l));
  const Vector mean = cov * p->rhs();
  const TriangularFactor factor = sparse_cholesky(p->assemble_precision(l));

  CycleParams v, w;
  w.shape = CycleShape::w;
  std::vector<std::unique_ptr<Sampler>> samplers;
  samplers.push_back(std::make_unique<SweepSampler>(p, SweepSampler::Kind::forward));
  samplers.push_back(std::make_unique<SweepSampler>(p, SweepSampler::Kind::backward));
  samplers.push_back(std::make_unique<SweepSampler>(p, SweepSampler::Kind::symmetric));
  samplers.push_back(std::make_unique<MgmcSampler>(p, v));
  samplers.push_back(std::make_unique<MgmcSampler>(p, w));

  bool ok = true;
  std::ostringstream d;
  d << "n=" << mean.size() << " beta=" << p->beta() << " chains=" << chains << ";";
  std::uint64_t tag = 0;
  for (auto &s : samplers) {
    MomentAccumulator acc(mean);
    Vector theta, scratch;
    for (Index j = 0; j < chains; ++j) {
      RngStream rng(1001 + tag, static_cast<std::uint64_t>(j));
      cholesky_draw(factor, p->rhs(), theta, rng, scratch);
      s->update(theta, rng);
      acc.add(theta);
    }
    const MomentComparison c = compare_moments(acc, mean, cov);
    ok = ok && c.within(4.0);
    d << ' ' << s->name() << " zmean=" << fmt("%.2f", c.max_mean_z) << " zcov=" << fmt("%.2f", c.max_cov_z);
    ++tag;
  }
  const double secs = seconds_since(t0);
  d << "; " << fmt("%.1f", secs) << "s (limit 120s)";
  return {ok && secs < 120.0, d.str()};
}

// Criteria 2 and 3 share the same 10^5 one-step updates.
struct OneStepStudy {
  MomentComparison cmp;
  double seconds = 0.0;
  Index n = 0;
};

const OneStepStudy &one_step_study() {
  static const OneStepStudy study = [] {
    const auto t0 = Clock::now();
    const auto p = shared(desk_prior(8, OperatorKind::shifted_laplace_fem, 100.0, 1));
    const CycleParams cp;
    MgmcSampler mg(p, cp);
    const IterationBundle b = build_iteration_bundle(*p, cp);
    const LevelIteration &top = b.finest();
    const Index n = top.a.rows();
    Vector theta0(n);
    for (Index i = 0; i < n; ++i)
      theta0[i] = std::cos(0.3 * static_cast<double>(i));
    const Vector expected = top.x * theta0 + top.y * p->rhs();
    MomentAccumulator acc(expected);
    const Index updates = 100000;
    for (Index j = 0; j < updates; ++j) {
      RngStream rng(2002, static_cast<std::uint64_t>(j));
      Vector theta = theta0;
      mg.update(theta, rng);
      acc.add(theta);
    }
    OneStepStudy s;
    s.cmp = compare_moments(acc, expected, top.k);
    s.seconds = seconds_since(t0);
    s.n = n;
    return s;
  }();
  return study;
}

Outcome oracle_mean() {
  const OneStepStudy &s = one_step_study();
  const bool ok = s.cmp.max_mean_z <= 4.0 && s.seconds < 60.0;
  return {ok, "2-level prior n=" + std::to_string(s.n) + ", 1e5 updates: max |mean - (X theta + Y f)| = " +
                  fmt("%.2f", s.cmp.max_mean_z) + " sigma; " + fmt("%.1f", s.seconds) + "s (limit 60s)"};
}

Outcome noise_covariance() {
  const OneStepStudy &s = one_step_study();
  return {s.cmp.max_cov_z <= 4.0,
          "max |Cov - (A^-1 - X A^-1 X^T)| = " + fmt("%.2f", s.cmp.max_cov_z) + " sigma over " +
              std::to_string(s.n * (s.n + 1) / 2) + " entries"};
}

Outcome contraction() {
  CycleParams cp;
  cp.coarse = CoarseMode::cholesky;
  std::vector<double> norms;
  std::ostringstream d;
  bool ok = true;
  for (auto [cells, coarsenings] : {std::pair{8, 1}, std::pair{16, 2}, std::pair{32, 3}}) {
    const PosteriorProblem p = desk_prior(cells, OperatorKind::shifted_laplace_fem, 100.0, coarsenings);
    const IterationBundle b = build_iteration_bundle(p, cp);
    const double e = energy_norm_of(b.finest().x, b.finest().a);
    norms.push_back(e);
    ok = ok && e < 1.0;
    d << cells << "^2 (" << coarsenings + 1 << " levels) " << fmt("%.4f", e) << "; ";
  }
  const double spread = *std::max_element(norms.begin(), norms.end()) -
                        *std::min_element(norms.begin(), norms.end());
  d << "spread " << fmt("%.4f", spread) << " (limit 0.1)";
  return {ok && spread <= 0.1, d.str()};
}

// Power iteration on the error recursions e -> X e and D -> X D X^T, driven
// through the oracle moment recursions with renormalisation after each step.
std::pair<double, double> asymptotic_factors(const LevelIteration &it, const Vector &f,
                                             int steps, int tail) {
  const Index n = it.a.rows();
  const Vector mu = it.a_inv * f;
  const DenseMatrix sigma = it.a_inv;
  Vector e(n);
  DenseMatrix dmat = DenseMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    e[i] = std::sin(1.3 * static_cast<double>(i) + 0.2);
    dmat(i, i) = 1.0 + 0.5 * std::cos(0.7 * static_cast<double>(i));
  }
  const double mscale = mu.norm() > 0.0 ? mu.norm() : 1.0;
  const double cscale = sigma.norm();
  e *= mscale / e.norm();
  dmat *= cscale / dmat.norm();
  double log_mean = 0.0, log_cov = 0.0;
  for (int s = 0; s < steps; ++s) {
    const Moments m = moment_recursions(it.x, it.y, it.k, f, mu + e, sigma + dmat, 1);
    const Vector e1 = m.mean - mu;
    DenseMatrix d1 = m.cov - sigma;
    d1 = 0.5 * (d1 + d1.transpose());
    if (s >= steps - tail) {
      log_mean += std::log(e1.norm() / e.norm());
      log_cov += std::log(d1.norm() / dmat.norm());
    }
    e = e1 * (mscale / e1.norm());
    dmat = d1 * (cscale / d1.norm());
  }
  return {std::exp(log_mean / tail), std::exp(log_cov / tail)};
}

Outcome rate_squaring() {
  struct Case {
    std::string name;
    PosteriorProblem problem;
    CycleParams params;
  };
  CycleParams v;
  CycleParams w;
  w.shape = CycleShape::w;
  CycleParams gibbs_like;
  gibbs_like.coarse = CoarseMode::smoother;
  gibbs_like.nu0 = 1;
  std::vector<Case> cases;
  cases.push_back({"fem-posterior-16 V(1,1)", desk_posterior(16, 8), v});
  cases.push_back({"ssl-fd-prior-16 W(1,1)",
                   desk_prior(16, OperatorKind::squared_shifted_laplace_fd, 100.0), w});
  cases.push_back({"fem-prior-16 V(1,1) 2-level nu0=1",
                   desk_prior(16, OperatorKind::shifted_laplace_fem, 100.0, 1), gibbs_like});
  bool ok = true;
  std::ostringstream d;
  for (auto &c : cases) {
    const IterationBundle b = build_iteration_bundle(c.problem, c.params);
    const auto [rm, rc] = asymptotic_factors(b.finest(), c.problem.rhs(), 400, 100);
    const double rel = std::abs(rc - rm * rm) / (rm * rm);
    ok = ok && rel <= 0.1;
    d << c.name << ": mean " << fmt("%.4g", rm) << " cov " << fmt("%.4g", rc) << " rel "
      << fmt("%.2e", rel) << "; ";
  }
  return {ok, d.str()};
}

RunConfig table_config(Index cells, OperatorKind op) {
  RunConfig c;
  c.problem.cells = cells;
  c.problem.op = op;
  c.problem.kappa_sq = 100.0;
  c.observations.count = 8;
  c.experiment.steps = 10000;
  c.experiment.warmup = 1000;
  return c;
}

struct IactRun {
  double tau = 0.0;
  double stderr_ = 0.0;
  bool reliable = true;
  std::string text() const {
    if (!reliable)
      return "unreliable";
    return fmt("%.3g", tau) + "+-" + fmt("%.2g", stderr_);
  }
};

IactRun measure_iact(const RunConfig &config, const std::string &kind) {
  const ProblemSetup setup = build_problem(config);
  auto sampler = make_sampler(kind, config, setup.problem);
  RngStream rng(config.seed, 0);
  Vector theta = Vector::Zero(setup.problem->size(setup.problem->finest()));
  run_chain(*sampler, setup.qoi, theta, config.experiment.warmup, rng);
  const auto z = run_chain(*sampler, setup.qoi, theta, config.experiment.steps, rng);
  IactRun r;
  try {
    const IactEstimate e = iact_wolff(z, config.experiment.wolff_s);
    r.tau = e.tau;
    r.stderr_ = e.stderr_;
  } catch (const UnreliableIact &) {
    r.reliable = false;
  }
  return r;
}

Outcome iact_table() {
  const auto t0 = Clock::now();
  const IactRun m32 = measure_iact(table_config(32, OperatorKind::shifted_laplace_fem), "mgmc");
  const IactRun m128 = measure_iact(table_config(128, OperatorKind::shifted_laplace_fem), "mgmc");
  const IactRun g128 = measure_iact(table_config(128, OperatorKind::shifted_laplace_fem), "gibbs");
  const double secs = seconds_since(t0);
  auto in_range = [](const IactRun &r) { return r.reliable && r.tau >= 1.0 && r.tau <= 1.5; };
  const bool gibbs_ok = !g128.reliable || g128.tau >= 20.0;
  const bool ok = in_range(m32) && in_range(m128) && gibbs_ok && secs < 600.0;
  return {ok, "MGMC 32^2 " + m32.text() + ", 128^2 " + m128.text() + " (want [1, 1.5]); Gibbs 128^2 " +
                  g128.text() + " (want >= 20); " + fmt("%.0f", secs) + "s (limit 600s)"};
}

Outcome ssl_iact() {
  const auto t0 = Clock::now();
  RunConfig c = table_config(64, OperatorKind::squared_shifted_laplace_fd);
  c.sampler.cycle.shape = CycleShape::w;
  const IactRun m = measure_iact(c, "mgmc");
  const IactRun g = measure_iact(c, "gibbs");
  const double secs = seconds_since(t0);
  const bool ok = m.reliable && m.tau >= 2.0 && m.tau <= 5.0 && (!g.reliable || g.tau > 100.0) &&
                  secs < 600.0;
  return {ok, "MGMC W(1,1) 64^2 " + m.text() + " (want [2, 5]); Gibbs " + g.text() +
                  " (want unreliable or > 100); " + fmt("%.0f", secs) + "s (limit 600s)"};
}

Outcome iact_bounds() {
  struct Case {
    std::string name;
    std::shared_ptr<const PosteriorProblem> problem;
    CycleParams params;
    bool gibbs = false;
    bool long_chain = false;
  };
  CycleParams v, w, vexact;
  w.shape = CycleShape::w;
  vexact.coarse = CoarseMode::cholesky;
  std::vector<Case> cases;
  for (auto [cells, depth] : {std::pair{8, 1}, std::pair{16, 2}, std::pair{32, 3}})
    cases.push_back({"prior-" + std::to_string(cells) + " V exact-coarse",
                     shared(desk_prior(cells, OperatorKind::shifted_laplace_fem, 100.0, depth)), vexact});
  for (Index cells : {8, 16, 32}) {
    cases.push_back({"posterior-" + std::to_string(cells) + " V", shared(desk_posterior(cells, 8)), v,
                     false, cells == 8});
    cases.push_back({"posterior-" + std::to_string(cells) + " W", shared(desk_posterior(cells, 8)), w});
  }
  cases.push_back({"ssl-fd-16 W", shared(desk_prior(16, OperatorKind::squared_shifted_laplace_fd, 100.0)), w});
  cases.push_back({"prior-4 gibbs", shared(desk_prior(4)), v, true, true});
  cases.push_back({"posterior-8 gibbs", shared(desk_posterior(8, 2)), v, true, true});

  bool ok = true;
  std::ostringstream bounds, chains;
  int checked = 0;
  for (auto &c : cases) {
    const int l = c.problem->finest();
    const Grid &grid = c.problem->level(l).grid;
    const Vector qoi = qoi_vector(grid, {0.5, 0.5, 0.0}, 1.01 * grid.h());
    const DenseMatrix a = c.problem->dense_precision(l);
    DenseMatrix x;
    if (c.gibbs) {
      const Index n = a.rows();
      const DenseMatrix id = DenseMatrix::Identity(n, n);
      const DenseMatrix ap = c.problem->level(l).precision.to_dense();
      const DenseMatrix mf = splitting_matrix(a, ap, 1.0, Direction::forward);
      const DenseMatrix mb = splitting_matrix(a, ap, 1.0, Direction::backward);
      x = (id - mb.partialPivLu().solve(a)) * (id - mf.partialPivLu().solve(a));
    } else {
      x = build_iteration_bundle(*c.problem, c.params).finest().x;
    }
    const double tau = exact_iact(x, a, qoi);
    const double bound = iact_bound(x, a);
    ok = ok && tau <= bound;
    ++checked;
    if (!c.gibbs)
      bounds << c.name << ' ' << fmt("%.3f", tau) << "<=" << fmt("%.3f", bound) << "; ";

    if (c.long_chain) {
      std::unique_ptr<Sampler> s;
      if (c.gibbs)
        s = std::make_unique<GibbsSampler>(c.problem);
      else
        s = std::make_unique<MgmcSampler>(c.problem, c.params);
      RngStream rng(3003, static_cast<std::uint64_t>(checked));
      Vector theta = Vector::Zero(a.rows());
      run_chain(*s, qoi, theta, 1000, rng);
      const auto z = run_chain(*s, qoi, theta, 1000000, rng);
      const IactEstimate e = iact_wolff(z);
      const double dev = std::abs(e.tau - tau) / e.stderr_;
      ok = ok && dev <= 3.0;
      chains << c.name << " exact " << fmt("%.4f", tau) << " Wolff " << fmt("%.4f", e.tau) << "+-"
             << fmt("%.4f", e.stderr_) << " (" << fmt("%.2f", dev) << " sigma); ";
    }
  }
  return {ok, std::to_string(checked) + " configurations bounded: " + bounds.str() + "1e6-step chains: " +
                  chains.str()};
}

// Median over batches of the time per call of `body`.
double median_time(const std::function<void()> &body, int batches, int per_batch) {
  std::vector<double> t;
  for (int b = 0; b < batches; ++b) {
    const auto t0 = Clock::now();
    for (int k = 0; k < per_batch; ++k)
      body();
    t.push_back(seconds_since(t0) / per_batch);
  }
  std::nth_element(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(t.size() / 2), t.end());
  return t[t.size() / 2];
}

Outcome cost_scaling() {
  std::ostringstream d;
  std::vector<double> n2, t2;
  for (Index cells : {64, 128, 256}) {
    const RunConfig c = table_config(cells, OperatorKind::shifted_laplace_fem);
    const ProblemSetup setup = build_problem(c);
    auto s = make_sampler("mgmc", c, setup.problem);
    Vector theta = Vector::Zero(setup.problem->size(setup.problem->finest()));
    RngStream rng(4004, 0);
    for (int k = 0; k < 5; ++k)
      s->update(theta, rng);
    const int per = static_cast<int>(std::max<Index>(4, 400 * 64 * 64 / (cells * cells)));
    const double t = median_time([&] { s->update(theta, rng); }, 7, per);
    n2.push_back(static_cast<double>(theta.size()));
    t2.push_back(t);
    d << cells << "^2 " << fmt("%.3f", 1e3 * t) << "ms; ";
  }
  const double slope2 = loglog_slope(n2, t2);
  d << "MGMC slope " << fmt("%.3f", slope2) << " (want [0.9, 1.25]); ";

  std::vector<double> n3, t3;
  for (Index cells : {16, 32, 48}) {
    RunConfig c;
    c.problem.dimension = 3;
    c.problem.cells = cells;
    c.problem.op = OperatorKind::shifted_laplace_fd;
    c.problem.kappa_sq = 1.0;
    c.problem.coarsenings = 0;
    c.observations.count = 32;
    c.observations.radius = 0.07;
    c.qoi.radius = 0.07;
    const ProblemSetup setup = build_problem(c);
    const auto t0 = Clock::now();
    CholeskySampler chol(setup.problem);
    const double setup_s = seconds_since(t0);
    Vector theta = Vector::Zero(setup.problem->size(setup.problem->finest()));
    RngStream rng(4005, 0);
    chol.update(theta, rng);
    const int per = cells == 48 ? 1 : cells == 32 ? 3 : 40;
    const double t = median_time([&] { chol.update(theta, rng); }, 5, per);
    n3.push_back(static_cast<double>(theta.size()));
    t3.push_back(t);
    d << cells << "^3 " << fmt("%.2f", 1e3 * t) << "ms (nnz U " << chol.factor().matrix.nnz()
      << ", factor " << fmt("%.1f", setup_s) << "s); ";
  }
  const double slope3 = loglog_slope(n3, t3);
  d << "Cholesky 3D slope " << fmt("%.3f", slope3) << " (want > 1.25)";
  return {slope2 >= 0.9 && slope2 <= 1.25 && slope3 > 1.25, d.str()};
}

Outcome rmse_parity() {
  const auto t0 = Clock::now();
  RunConfig c = table_config(64, OperatorKind::shifted_laplace_fem);
  c.experiment.chains = 100;
  c.experiment.steps = 1000;
  c.experiment.samplers = {"mgmc", "gibbs", "cholesky"};
  const fs::path out = fs::temp_directory_path() / "mgmc_acceptance_rmse";
  const RunRecord rec = cmd_rmse(c, out);
  fs::remove_all(out);
  std::map<std::string, std::vector<double>> curve;
  std::vector<Index> lengths;
  for (const auto &cv : rec.outputs.at("curves")) {
    curve[cv.at("sampler").get<std::string>()] = cv.at("rmse").get<std::vector<double>>();
    lengths = cv.at("lengths").get<std::vector<Index>>();
  }
  const auto &mg = curve.at("mgmc");
  const auto &ch = curve.at("cholesky");
  const auto &gb = curve.at("gibbs");
  bool parity = true, gibbs_above = true;
  double worst_ratio = 1.0, min_gibbs_ratio = INFINITY;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const double r = mg[i] / ch[i];
    worst_ratio = std::max(worst_ratio, std::max(r, 1.0 / r));
    parity = parity && r <= 2.0 && r >= 0.5;
    if (lengths[i] >= 10) {
      gibbs_above = gibbs_above && gb[i] > mg[i];
      min_gibbs_ratio = std::min(min_gibbs_ratio, gb[i] / mg[i]);
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "64^2, 100 chains, M in [" << lengths.front() << ", " << lengths.back()
    << "]: worst MGMC/Cholesky factor " << fmt("%.2f", worst_ratio) << " (limit 2); min Gibbs/MGMC for M>=10 "
    << fmt("%.2f", min_gibbs_ratio) << " (want > 1); at M=" << lengths.back() << ": cholesky "
    << fmt("%.2e", ch.back()) << " mgmc " << fmt("%.2e", mg.back()) << " gibbs " << fmt("%.2e", gb.back())
    << "; " << fmt("%.0f", secs) << "s (limit 600s)";
  return {parity && gibbs_above && secs < 600.0, d.str()};
}

Outcome estimator_properties() {
  const Index m = 1000000;
  std::mt19937_64 gen(5005);
  std::normal_distribution<double> n01;
  auto ar1 = [&](double rho) {
    std::vector<double> z(static_cast<std::size_t>(m));
    double x = n01(gen) / std::sqrt(1.0 - rho * rho);
    for (auto &v : z) {
      x = rho * x + n01(gen);
      v = x;
    }
    return z;
  };
  bool ok = true;
  std::ostringstream d;
  for (double rho : {0.0, 0.3, 0.5, 0.8}) {
    const IactEstimate e = iact_wolff(ar1(rho));
    const double exact = (1.0 + rho) / (1.0 - rho);
    const double dev = std::abs(e.tau - exact) / e.stderr_;
    ok = ok && dev <= 3.0;
    d << "rho=" << rho << " tau " << fmt("%.4f", e.tau) << " vs " << fmt("%.4f", exact) << " ("
      << fmt("%.2f", dev) << " sigma); ";
  }
  const Index chains = 1000, len = 1000;
  DenseMatrix c(chains, len);
  for (Index i = 0; i < chains; ++i)
    for (Index j = 0; j < len; ++j)
      c(i, j) = n01(gen);
  const std::vector<Index> lengths{1, 2, 5, 10, 20, 50, 100, 200, 500, 1000};
  const auto r = rmse_curve(c, 0.0, lengths);
  const std::vector<double> xs(lengths.begin(), lengths.end());
  const double slope = loglog_slope(xs, r);
  ok = ok && std::abs(slope + 0.5) <= 0.1;
  d << "RMSE slope " << fmt("%.3f", slope) << " (want -0.5 +- 0.1)";
  return {ok, d.str()};
}

struct Criterion {
  int id;
  const char *name;
  Outcome (*run)();
};

} // namespace

int main(int argc, char **argv) {
  const Criterion criteria[] = {
      {1, "invariance", invariance_suite},
      {2, "oracle-mean", oracle_mean},
      {3, "noise-covariance", noise_covariance},
      {4, "contraction", contraction},
      {5, "rate-squaring", rate_squaring},
      {6, "iact-fem", iact_table},
      {7, "iact-ssl", ssl_iact},
      {8, "iact-bound", iact_bounds},
      {9, "cost-scaling", cost_scaling},
      {10, "rmse-parity", rmse_parity},
      {11, "estimators", estimator_properties},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i)
    selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto &c : criteria) {
    if (!selected.empty() && !selected.count(c.id))
      continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass)
      ++failures;
    std::printf("%s %2d %-16s [%6.1fs] %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
