#include "mgmc/samplers.hpp"

#include "mgmc/errors.hpp"

namespace mgmc {

std::string to_string(CoarseMode mode) {
  return mode == CoarseMode::cholesky ? "cholesky" : "smoother";
}

std::string to_string(CycleShape shape) { return shape == CycleShape::w ? "w" : "v"; }

CoarseMode coarse_mode_from_string(const std::string &name) {
  if (name == "smoother")
    return CoarseMode::smoother;
  if (name == "cholesky")
    return CoarseMode::cholesky;
  throw InvalidArgument("unknown coarse mode '" + name + "'");
}

CycleShape cycle_shape_from_string(const std::string &name) {
  if (name == "v" || name == "V")
    return CycleShape::v;
  if (name == "w" || name == "W")
    return CycleShape::w;
  throw InvalidArgument("unknown cycle shape '" + name + "'");
}

int CycleParams::gamma(int l, int finest) const {
  if (shape == CycleShape::v || l == finest)
    return 1;
  return 2;
}

void CycleParams::validate() const {
  if (nu1 < 0 || nu2 < 0 || nu1 + nu2 < 1)
    throw InvalidArgument("cycle needs nu1, nu2 >= 0 with nu1 + nu2 >= 1");
  if (coarse == CoarseMode::smoother && nu0 < 1)
    throw InvalidArgument("coarse smoother needs nu0 >= 1");
  if (!(omega > 0.0 && omega < 2.0))
    throw InvalidArgument("relaxation parameter must lie in (0, 2)");
}

std::vector<LevelSmoothers> precompute_smoothers(const PosteriorProblem &problem,
                                                 double omega) {
  std::vector<LevelSmoothers> out;
  out.reserve(static_cast<std::size_t>(problem.finest() + 1));
  for (int l = 0; l <= problem.finest(); ++l) {
    const Level &lv = problem.level(l);
    out.push_back({precompute_lowrank(lv.precision, lv.observation, problem.noise(), omega,
                                      Direction::forward),
                   precompute_lowrank(lv.precision, lv.observation, problem.noise(), omega,
                                      Direction::backward)});
  }
  return out;
}

CoarseSampler::CoarseSampler(std::shared_ptr<const PosteriorProblem> problem,
                             std::shared_ptr<const std::vector<LevelSmoothers>> smoothers,
                             const CycleParams &params)
    : problem_(std::move(problem)), smoothers_(std::move(smoothers)), mode_(params.coarse),
      nu0_(params.nu0) {
  if (mode_ == CoarseMode::cholesky)
    factor_ = std::make_shared<const TriangularFactor>(
        sparse_cholesky(problem_->assemble_precision(0), Ordering::fill_reducing));
}

void CoarseSampler::sample(const Vector &f, Vector &theta, RngStream &rng, SweepWorkspace &ws,
                           Vector &scratch) const {
  if (mode_ == CoarseMode::cholesky) {
    cholesky_draw(*factor_, f, theta, rng, scratch);
    return;
  }
  const LevelSmoothers &s = (*smoothers_)[0];
  for (int j = 0; j < nu0_; ++j)
    symmetric_gibbs_step(*problem_, 0, s.forward, s.backward, f, theta, rng, ws);
}

MgmcSampler::MgmcSampler(std::shared_ptr<const PosteriorProblem> problem,
                         const CycleParams &params)
    : problem_(std::move(problem)), params_(params) {
  if (!problem_)
    throw InvalidArgument("MGMC sampler needs a problem");
  params_.validate();
  smoothers_ = std::make_shared<const std::vector<LevelSmoothers>>(
      precompute_smoothers(*problem_, params_.omega));
  coarse_ = std::make_shared<const CoarseSampler>(problem_, smoothers_, params_);
  allocate();
}

void MgmcSampler::allocate() {
  ws_.assign(static_cast<std::size_t>(problem_->finest() + 1), Workspace{});
  for (int l = 0; l <= problem_->finest(); ++l) {
    Workspace &w = ws_[static_cast<std::size_t>(l)];
    const Index n = problem_->size(l);
    w.residual.resize(n);
    w.sweep.resize(n, problem_->beta());
    if (l > 0) {
      w.coarse_rhs.resize(problem_->size(l - 1));
      w.correction.resize(problem_->size(l - 1));
    }
  }
}

std::string MgmcSampler::name() const {
  return "mgmc-" + to_string(params_.shape) + "(" + std::to_string(params_.nu1) + "," +
         std::to_string(params_.nu2) + ")";
}

std::unique_ptr<Sampler> MgmcSampler::clone() const {
  auto copy = std::unique_ptr<MgmcSampler>(new MgmcSampler(*this));
  copy->allocate();
  return copy;
}

void MgmcSampler::update(Vector &theta, RngStream &rng) {
  cycle(problem_->finest(), problem_->rhs(), theta, rng);
}

void MgmcSampler::cycle(int l, const Vector &f, Vector &theta, RngStream &rng) {
  if (l < 0 || l > problem_->finest())
    throw InvalidArgument("cycle: level out of range");
  Workspace &w = ws_[static_cast<std::size_t>(l)];
  if (l == 0) {
    coarse_->sample(f, theta, rng, w.sweep, w.scratch);
    return;
  }
  const LevelSmoothers &s = (*smoothers_)[static_cast<std::size_t>(l)];
  for (int k = 0; k < params_.nu1; ++k)
    gibbs_lowrank_step(*problem_, l, s.forward, f, theta, rng, w.sweep);

  const Level &lv = problem_->level(l);
  w.residual = f;
  problem_->subtract_precision(l, theta, w.residual);
  lv.prolongation.transpose_multiply(w.residual, w.coarse_rhs);
  w.correction.setZero();
  const int calls = params_.gamma(l, problem_->finest());
  for (int k = 0; k < calls; ++k)
    cycle(l - 1, w.coarse_rhs, w.correction, rng);
  lv.prolongation.multiply_add(w.correction, theta);

  for (int k = 0; k < params_.nu2; ++k)
    gibbs_lowrank_step(*problem_, l, s.backward, f, theta, rng, w.sweep);
}

GibbsSampler::GibbsSampler(std::shared_ptr<const PosteriorProblem> problem, int sweeps,
                           double omega)
    : problem_(std::move(problem)), sweeps_(sweeps) {
  if (!problem_)
    throw InvalidArgument("Gibbs sampler needs a problem");
  if (sweeps_ < 1)
    throw InvalidArgument("Gibbs sampler needs at least one sweep");
  const int l = problem_->finest();
  const Level &lv = problem_->level(l);
  smoothers_ = std::make_shared<const LevelSmoothers>(LevelSmoothers{
      precompute_lowrank(lv.precision, lv.observation, problem_->noise(), omega,
                         Direction::forward),
      precompute_lowrank(lv.precision, lv.observation, problem_->noise(), omega,
                         Direction::backward)});
}

void GibbsSampler::update(Vector &theta, RngStream &rng) {
  const int l = problem_->finest();
  for (int k = 0; k < sweeps_; ++k)
    symmetric_gibbs_step(*problem_, l, smoothers_->forward, smoothers_->backward,
                         problem_->rhs(), theta, rng, ws_);
}

std::unique_ptr<Sampler> GibbsSampler::clone() const {
  auto copy = std::make_unique<GibbsSampler>(*this);
  copy->ws_ = SweepWorkspace{};
  return copy;
}

CholeskySampler::CholeskySampler(std::shared_ptr<const PosteriorProblem> problem,
                                 Ordering ordering)
    : problem_(std::move(problem)) {
  if (!problem_)
    throw InvalidArgument("Cholesky sampler needs a problem");
  factor_ = std::make_shared<const TriangularFactor>(
      sparse_cholesky(problem_->assemble_precision(problem_->finest()), ordering));
  shift_ = factor_->forward_rhs(problem_->rhs());
}

void CholeskySampler::update(Vector &theta, RngStream &rng) {
  cholesky_draw_shifted(*factor_, shift_, theta, rng, scratch_);
}

std::unique_ptr<Sampler> CholeskySampler::clone() const {
  auto copy = std::make_unique<CholeskySampler>(*this);
  copy->scratch_ = Vector();
  return copy;
}

} // namespace mgmc
