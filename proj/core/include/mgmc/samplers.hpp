#pragma once

#include "mgmc/smoothers.hpp"

#include <memory>
#include <string>
#include <vector>

namespace mgmc {

enum class CoarseMode { smoother, cholesky };
enum class CycleShape { v, w };

std::string to_string(CoarseMode mode);
std::string to_string(CycleShape shape);
CoarseMode coarse_mode_from_string(const std::string &name);
CycleShape cycle_shape_from_string(const std::string &name);

struct CycleParams {
  int nu1 = 1;
  int nu2 = 1;
  CycleShape shape = CycleShape::v;
  int nu0 = 4;
  CoarseMode coarse = CoarseMode::smoother;
  double omega = 1.0;

  /// Recursive calls issued from level l (1 <= l <= finest): 1 for a V-cycle;
  /// for a W-cycle 2 below the finest level and 1 on it.
  int gamma(int l, int finest) const;
  void validate() const;
};

/// Markov chain update theta -> theta' on the finest level of a problem.
class Sampler {
public:
  virtual ~Sampler() = default;
  virtual void update(Vector &theta, RngStream &rng) = 0;
  virtual std::string name() const = 0;
  /// Copy sharing all immutable setup data but with its own workspace, so
  /// that clones can run on different threads.
  virtual std::unique_ptr<Sampler> clone() const = 0;
  virtual const PosteriorProblem &problem() const = 0;
};

/// Per-level smoother data shared by MGMC and Gibbs.
struct LevelSmoothers {
  LowRankPrecompute forward;
  LowRankPrecompute backward;
};

std::vector<LevelSmoothers> precompute_smoothers(const PosteriorProblem &problem,
                                                 double omega);

/// Coarse level sampler: nu0 symmetric low-rank Gibbs steps, or an exact draw
/// from a Cholesky factor of the coarsest posterior precision.
class CoarseSampler {
public:
  CoarseSampler(std::shared_ptr<const PosteriorProblem> problem,
                std::shared_ptr<const std::vector<LevelSmoothers>> smoothers,
                const CycleParams &params);

  void sample(const Vector &f, Vector &theta, RngStream &rng, SweepWorkspace &ws,
              Vector &scratch) const;
  CoarseMode mode() const { return mode_; }

private:
  std::shared_ptr<const PosteriorProblem> problem_;
  std::shared_ptr<const std::vector<LevelSmoothers>> smoothers_;
  CoarseMode mode_;
  int nu0_;
  std::shared_ptr<const TriangularFactor> factor_;
};

class MgmcSampler final : public Sampler {
public:
  MgmcSampler(std::shared_ptr<const PosteriorProblem> problem, const CycleParams &params);

  void update(Vector &theta, RngStream &rng) override;
  std::string name() const override;
  std::unique_ptr<Sampler> clone() const override;
  const PosteriorProblem &problem() const override { return *problem_; }

  /// One cycle on level l with right-hand side f (the finest-level update is
  /// cycle(finest, rhs)).
  void cycle(int l, const Vector &f, Vector &theta, RngStream &rng);

  const CycleParams &params() const { return params_; }

private:
  struct Workspace {
    Vector residual;
    Vector coarse_rhs;
    Vector correction;
    Vector scratch;
    SweepWorkspace sweep;
  };

  std::shared_ptr<const PosteriorProblem> problem_;
  CycleParams params_;
  std::shared_ptr<const std::vector<LevelSmoothers>> smoothers_;
  std::shared_ptr<const CoarseSampler> coarse_;
  std::vector<Workspace> ws_;

  void allocate();
};

/// nu_G symmetric low-rank Gibbs sweeps on the finest level.
class GibbsSampler final : public Sampler {
public:
  GibbsSampler(std::shared_ptr<const PosteriorProblem> problem, int sweeps = 1,
               double omega = 1.0);

  void update(Vector &theta, RngStream &rng) override;
  std::string name() const override { return "gibbs"; }
  std::unique_ptr<Sampler> clone() const override;
  const PosteriorProblem &problem() const override { return *problem_; }

private:
  std::shared_ptr<const PosteriorProblem> problem_;
  int sweeps_;
  std::shared_ptr<const LevelSmoothers> smoothers_;
  SweepWorkspace ws_;
};

/// Independent draws from a fill-reducing sparse Cholesky factor of Ã_L.
/// The incoming state is ignored.
class CholeskySampler final : public Sampler {
public:
  explicit CholeskySampler(std::shared_ptr<const PosteriorProblem> problem,
                           Ordering ordering = Ordering::fill_reducing);

  void update(Vector &theta, RngStream &rng) override;
  std::string name() const override { return "cholesky"; }
  std::unique_ptr<Sampler> clone() const override;
  const PosteriorProblem &problem() const override { return *problem_; }
  const TriangularFactor &factor() const { return *factor_; }

private:
  std::shared_ptr<const PosteriorProblem> problem_;
  std::shared_ptr<const TriangularFactor> factor_;
  Vector shift_; // U^{-T} P f
  Vector scratch_;
};

} // namespace mgmc
