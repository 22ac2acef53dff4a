#include "mgmc/errors.hpp"
#include "mgmc/samplers.hpp"
#include "mgmc/verify.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/LU>

#include <memory>

using namespace mgmc;

namespace {

std::shared_ptr<const PosteriorProblem> shared(PosteriorProblem p) {
  return std::make_shared<const PosteriorProblem>(std::move(p));
}

// M = D / omega + L (forward) or D / omega + U (backward) of the prior,
// plus the data term, as a dense matrix.
DenseMatrix woodbury_splitting(const PosteriorProblem &p, int l, bool forward) {
  const DenseMatrix a = p.level(l).precision.to_dense();
  const DenseMatrix at = p.dense_precision(l);
  DenseMatrix m = at - a;
  m.diagonal() += a.diagonal();
  if (forward)
    m += a.triangularView<Eigen::StrictlyLower>().toDenseMatrix();
  else
    m += a.triangularView<Eigen::StrictlyUpper>().toDenseMatrix();
  return m;
}

} // namespace

TEST_CASE("prior Gibbs sweeps match a single-site heat bath to round-off") {
  const PosteriorProblem p = desk_prior(8);
  const int l = p.finest();
  const DenseMatrix a = p.level(l).precision.to_dense();
  const auto smoothers = precompute_smoothers(p, 1.0);
  for (bool forward : {true, false}) {
    Vector theta = Vector::LinSpaced(a.rows(), -1.0, 1.0);
    Vector oracle = theta;
    RngStream rng(17, 1), replay(17, 1);
    SweepWorkspace ws;
    for (int step = 0; step < 5; ++step) {
      Vector z(a.rows());
      replay.fill_normal(z);
      testing::heat_bath_sweep(a, p.rhs(), oracle, z, forward);
      gibbs_lowrank_step(p, l, forward ? smoothers[l].forward : smoothers[l].backward, p.rhs(),
                         theta, rng, ws);
    }
    CHECK((theta - oracle).cwiseAbs().maxCoeff() < 1e-14 * oracle.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("Gibbs sampler applies forward then backward sweeps") {
  const auto p = shared(desk_prior(8));
  GibbsSampler gibbs(p, 2);
  const DenseMatrix a = p->level(p->finest()).precision.to_dense();
  Vector theta = Vector::Zero(a.rows()), oracle = theta;
  RngStream rng(3, 0), replay(3, 0);
  gibbs.update(theta, rng);
  for (int s = 0; s < 2; ++s)
    for (bool fwd : {true, false}) {
      Vector z(a.rows());
      replay.fill_normal(z);
      testing::heat_bath_sweep(a, p->rhs(), oracle, z, fwd);
    }
  CHECK((theta - oracle).norm() < 1e-13 * oracle.norm());
  CHECK(gibbs.name() == "gibbs");
}

TEST_CASE("deterministic two-grid cycle matches a dense two-grid solver") {
  const auto p = shared(desk_posterior(8, 2, OperatorKind::shifted_laplace_fem, 100.0, 1));
  CycleParams cp;
  cp.coarse = CoarseMode::cholesky;
  cp.nu1 = 2;
  cp.nu2 = 1;
  MgmcSampler mg(p, cp);

  const int l = p->finest();
  const DenseMatrix at = p->dense_precision(l);
  const DenseMatrix atc = p->dense_precision(l - 1);
  const DenseMatrix pr = p->level(l).prolongation.to_dense();
  const DenseMatrix mf = woodbury_splitting(*p, l, true);
  const DenseMatrix mb = woodbury_splitting(*p, l, false);
  const Vector f = p->rhs();

  Vector theta = Vector::LinSpaced(at.rows(), 3.0, -1.0);
  Vector x = theta;
  for (int k = 0; k < 2; ++k)
    x += mf.partialPivLu().solve(f - at * x);
  x += pr * atc.llt().solve(pr.transpose() * (f - at * x));
  x += mb.partialPivLu().solve(f - at * x);

  RngStream silent = RngStream::silent();
  mg.update(theta, silent);
  CHECK((theta - x).norm() < 1e-10 * x.norm());
}

TEST_CASE("deterministic cycle converges to the posterior mean") {
  const auto p = shared(desk_posterior(16, 4));
  for (auto shape : {CycleShape::v, CycleShape::w}) {
    CycleParams cp;
    cp.shape = shape;
    MgmcSampler mg(p, cp);
    const Vector mean = p->dense_precision(p->finest()).llt().solve(p->rhs());
    Vector theta = Vector::Zero(mean.size());
    RngStream silent = RngStream::silent();
    for (int k = 0; k < 40; ++k)
      mg.update(theta, silent);
    CHECK((theta - mean).norm() < 1e-8 * mean.norm());
  }
}

TEST_CASE("Cholesky sampler with silent noise returns the mean") {
  const auto p = shared(desk_posterior(8, 3));
  CholeskySampler chol(p);
  Vector theta = Vector::Zero(p->size(p->finest()));
  RngStream silent = RngStream::silent();
  chol.update(theta, silent);
  const Vector mean = p->dense_precision(p->finest()).llt().solve(p->rhs());
  CHECK((theta - mean).norm() < 1e-10 * mean.norm());
  CHECK(chol.name() == "cholesky");
}

TEST_CASE("clones reproduce the parent chain") {
  const auto p = shared(desk_posterior(16, 4));
  CycleParams cp;
  cp.shape = CycleShape::w;
  MgmcSampler mg(p, cp);
  const auto copy = mg.clone();
  Vector a = Vector::Zero(p->size(p->finest())), b = a;
  RngStream ra(8, 2), rb(8, 2);
  for (int k = 0; k < 3; ++k) {
    mg.update(a, ra);
    copy->update(b, rb);
  }
  CHECK(a == b);
  CHECK(copy->name() == "mgmc-w(1,1)");
}

TEST_CASE("cycle parameters") {
  CycleParams cp;
  CHECK(cp.gamma(2, 3) == 1);
  cp.shape = CycleShape::w;
  CHECK(cp.gamma(2, 3) == 2);
  CHECK(cp.gamma(3, 3) == 1);
  cp.omega = 2.0;
  CHECK_THROWS_AS(cp.validate(), InvalidArgument);
  cp.omega = 1.0;
  cp.nu1 = cp.nu2 = 0;
  CHECK_THROWS_AS(cp.validate(), InvalidArgument);
  CHECK(cycle_shape_from_string(to_string(CycleShape::w)) == CycleShape::w);
  CHECK(coarse_mode_from_string(to_string(CoarseMode::cholesky)) == CoarseMode::cholesky);
  CHECK_THROWS(cycle_shape_from_string("f"));
}

TEST_CASE("mismatched precompute is rejected") {
  const PosteriorProblem p = desk_posterior(8, 2);
  const auto smoothers = precompute_smoothers(p, 1.0);
  Vector theta = Vector::Zero(p.size(p.finest()));
  RngStream rng(1, 1);
  SweepWorkspace ws;
  CHECK_THROWS_AS(gibbs_lowrank_step(p, p.finest(), smoothers[0].forward, p.rhs(), theta, rng, ws),
                  StateError);
}
