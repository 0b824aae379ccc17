#include <gtest/gtest.h>

#include <cmath>

#include "numcore/error.hpp"
#include "numcore/rng.hpp"
#include "optim/perturb.hpp"
#include "optim/schedule.hpp"
#include "optim/steps.hpp"
#include "test_util.hpp"
#include "testbed/quadratic.hpp"

namespace lesam {
namespace {

using numcore::Batch;
using numcore::CounterRng;
using numcore::Vec;
using optim::Algo;
using optim::LeSamConfig;
using optim::OptimizerConfig;
using optim::OptimizerState;

std::shared_ptr<testbed::QuadraticObjective> unit_quadratic(int dim, double a = 1.0) {
  return testbed::make_quadratic(testbed::QuadraticSpec{Vec::Constant(dim, a), Vec::Zero(dim)});
}

TEST(CosineAnneal, FlatThenHalfwayThenExactZero) {
  // sigma0 = 0.3, T = 200, window 40: flat until 160, half at 180, zero at 200.
  EXPECT_EQ(optim::cosine_anneal_sigma(0.3, 0.0, 40, 200), 0.3);
  EXPECT_EQ(optim::cosine_anneal_sigma(0.3, 159.0, 40, 200), 0.3);
  EXPECT_EQ(optim::cosine_anneal_sigma(0.3, 160.0, 40, 200), 0.3);
  EXPECT_NEAR(optim::cosine_anneal_sigma(0.3, 180.0, 40, 200), 0.15, 1e-15);
  EXPECT_EQ(optim::cosine_anneal_sigma(0.3, 200.0, 40, 200), 0.0);
}

TEST(CosineAnneal, ZeroWindowDisablesSchedule) {
  for (double epoch : {0.0, 100.0, 200.0}) {
    EXPECT_EQ(optim::cosine_anneal_sigma(0.35, epoch, 0, 200), 0.35);
  }
}

TEST(CosineAnneal, MonotoneNonincreasingInsideWindow) {
  double prev = optim::cosine_anneal_sigma(1.0, 160.0, 40, 200);
  for (int e = 161; e <= 200; ++e) {
    const double cur = optim::cosine_anneal_sigma(1.0, static_cast<double>(e), 40, 200);
    EXPECT_LE(cur, prev);
    prev = cur;
  }
}

TEST(CosineAnneal, RejectsBadArguments) {
  EXPECT_THROW(optim::cosine_anneal_sigma(-0.1, 0.0, 0, 10), Error);
  EXPECT_THROW(optim::cosine_anneal_sigma(0.1, 0.0, 11, 10), Error);
  EXPECT_THROW(optim::cosine_anneal_sigma(0.1, 0.0, -1, 10), Error);
  EXPECT_THROW(optim::cosine_anneal_sigma(0.1, 0.0, 0, 0), Error);
}

TEST(LesamRadius, BacksolvesBudgetAndClips) {
  // sigma 0.35 against ||g|| = 0.7: radius 0.5, no clipping.
  auto ps = optim::lesam_radius(0.35, 0.7, 1e-12, optim::kNoClip);
  EXPECT_NEAR(ps.rho_raw, 0.5, 1e-11);
  EXPECT_EQ(ps.rho_clipped, ps.rho_raw);
  EXPECT_FALSE(ps.was_clipped);
  ASSERT_TRUE(ps.sigma_t.has_value());
  EXPECT_EQ(*ps.sigma_t, 0.35);

  // Vanishing gradient: raw radius explodes, cap catches it.
  auto clipped = optim::lesam_radius(0.35, 1e-9, 1e-12, 0.4);
  EXPECT_GT(clipped.rho_raw, 1e8);
  EXPECT_EQ(clipped.rho_clipped, 0.4);
  EXPECT_TRUE(clipped.was_clipped);

  // Zero budget: zero radius regardless of the gradient.
  auto zero = optim::lesam_radius(0.0, 0.7, 1e-12, optim::kNoClip);
  EXPECT_EQ(zero.rho_raw, 0.0);
  EXPECT_EQ(zero.rho_clipped, 0.0);
  EXPECT_FALSE(zero.was_clipped);
}

TEST(LesamRadius, VarrhoKeepsZeroGradientFinite) {
  auto ps = optim::lesam_radius(0.35, 0.0, 1e-12, optim::kNoClip);
  EXPECT_TRUE(std::isfinite(ps.rho_raw));
  EXPECT_NEAR(ps.rho_raw, 3.5e11, 1e-3 * 3.5e11);
}

TEST(SamPerturb, ScalesGradientToRadius) {
  Vec g(2);
  g << 3.0, 4.0;
  Vec eps = optim::sam_perturb(g, 0.05);
  EXPECT_NEAR(eps[0], 0.03, 1e-15);
  EXPECT_NEAR(eps[1], 0.04, 1e-15);
  EXPECT_NEAR(eps.norm(), 0.05, 1e-15);
}

TEST(SamPerturb, ZeroGradientThrows) {
  try {
    optim::sam_perturb(Vec::Zero(3), 0.1);
    FAIL() << "expected ZeroDirection";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::zero_direction);
  }
}

TEST(SgdStep, MomentumUnrollMatchesHand) {
  // lr 0.1, momentum 0.9, constant gradient 1: w goes 0 -> -0.1 -> -0.29.
  Vec w = Vec::Zero(1);
  Vec g = Vec::Constant(1, 1.0);
  OptimizerState state = optim::make_state(Algo::kSgd);
  std::tie(w, state) = optim::sgd_step(w, g, std::move(state), 0.1, 0.9, 0.0);
  EXPECT_NEAR(w[0], -0.1, 1e-16);
  std::tie(w, state) = optim::sgd_step(w, g, std::move(state), 0.1, 0.9, 0.0);
  EXPECT_NEAR(w[0], -0.29, 1e-15);
  EXPECT_EQ(state.step_count, 2);
}

TEST(SgdStep, CoupledWeightDecayAddsLambdaW) {
  Vec w = Vec::Constant(1, 1.0);
  Vec g = Vec::Constant(1, 2.0);
  OptimizerState state = optim::make_state(Algo::kSgd);
  std::tie(w, state) = optim::sgd_step(w, g, std::move(state), 0.1, 0.0, 0.1);
  EXPECT_NEAR(w[0], 1.0 - 0.1 * 2.1, 1e-15);
  EXPECT_FALSE(state.momentum_buf.has_value());  // momentum 0 never materializes
}

TEST(SgdStep, MomentumBufferMaterializesOnlyWhenUsed) {
  Vec w = Vec::Zero(2);
  Vec g = Vec::Constant(2, 1.0);
  OptimizerState state = optim::make_state(Algo::kSgd);
  std::tie(w, state) = optim::sgd_step(w, g, std::move(state), 0.1, 0.5, 0.0);
  ASSERT_TRUE(state.momentum_buf.has_value());
  EXPECT_EQ((*state.momentum_buf)[0], 1.0);
}

TEST(PolyakStep, HalvesDistanceOnScalarQuadratic) {
  for (double a : {0.1, 1.0, 10.0}) {
    double w = 3.0;
    for (int it = 0; it < 6; ++it) {
      Vec wv = Vec::Constant(1, w);
      Vec g = Vec::Constant(1, a * w);
      Vec next = optim::polyak_step(wv, g, 0.5 * a * w * w, 0.0);
      EXPECT_NEAR(next[0], w / 2.0, 1e-12 * std::abs(w));
      w = next[0];
    }
  }
}

TEST(PolyakStep, EdgeCases) {
  Vec w = Vec::Constant(1, 1.0);
  EXPECT_THROW(optim::polyak_step(w, Vec::Constant(1, 1.0), -1.0, 0.0), Error);
  // At the target level with zero gradient: stay put.
  Vec same = optim::polyak_step(w, Vec::Zero(1), 2.0, 2.0);
  EXPECT_EQ(same[0], 1.0);
  // Above the target level with zero gradient: no direction to move.
  try {
    optim::polyak_step(w, Vec::Zero(1), 3.0, 0.0);
    FAIL() << "expected ZeroDirection";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::zero_direction);
  }
}

TEST(LesamStep, HandUnrolledQuadraticStep) {
  // a = 1, w = 1, sigma = 0.5, lr = 0.1: rho = 0.5/(1 + varrho), ghat = 1 + rho,
  // w' = 1 - 0.1 (1 + rho), approximately 0.85.
  auto obj = unit_quadratic(1);
  LeSamConfig cfg;
  cfg.sigma0 = 0.5;
  cfg.lr = 0.1;
  auto r = optim::lesam_step(*obj, Vec::Constant(1, 1.0), Batch::none(), cfg,
                             optim::make_state(Algo::kLeSam), 0);
  const double rho = 0.5 / (1.0 + 1e-12);
  EXPECT_NEAR(r.w[0], 1.0 - 0.1 * (1.0 + rho), 1e-15);
  ASSERT_TRUE(r.report.perturb.has_value());
  EXPECT_NEAR(r.report.perturb->rho_clipped, 0.5, 1e-11);
  EXPECT_NEAR(*r.report.loss_perturbed, 0.5 * (1.0 + rho) * (1.0 + rho), 1e-12);
  EXPECT_EQ(r.report.loss_center, 0.5);
}

TEST(LesamStep, TwoGradEvalsPerStepEvenAtZeroBudget) {
  auto counted = std::make_shared<numcore::CountingObjective>(unit_quadratic(2));
  LeSamConfig cfg;
  cfg.sigma0 = 0.0;
  OptimizerState state = optim::make_state(Algo::kLeSam);
  Vec w = Vec::Constant(2, 1.0);
  for (int i = 0; i < 5; ++i) {
    auto r = optim::lesam_step(*counted, w, Batch::none(), cfg, std::move(state), 0);
    w = std::move(r.w);
    state = std::move(r.state);
  }
  EXPECT_EQ(counted->grad_evals(), 10);
}

TEST(LesamStep, ZeroBudgetMatchesSgdBitwise) {
  auto obj = unit_quadratic(3, 1.3);
  LeSamConfig cfg;
  cfg.sigma0 = 0.0;
  cfg.lr = 0.07;
  cfg.momentum = 0.9;
  cfg.weight_decay = 0.01;

  Vec w_lesam = Vec::Constant(3, 1.7);
  Vec w_sgd = w_lesam;
  OptimizerState s_lesam = optim::make_state(Algo::kLeSam);
  OptimizerState s_sgd = optim::make_state(Algo::kSgd);
  for (int i = 0; i < 20; ++i) {
    auto r = optim::lesam_step(*obj, w_lesam, Batch::none(), cfg, std::move(s_lesam), 0);
    w_lesam = std::move(r.w);
    s_lesam = std::move(r.state);
    Vec g = obj->grad(w_sgd, Batch::none());
    std::tie(w_sgd, s_sgd) =
        optim::sgd_step(w_sgd, g, std::move(s_sgd), cfg.lr, cfg.momentum, cfg.weight_decay);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(w_lesam[k], w_sgd[k]);
  }
}

TEST(LesamStep, MatchesSamWhenRadiusAgrees) {
  // With rho = sigma / (||g|| + varrho), one LE-SAM step equals one SAM step.
  auto obj = unit_quadratic(4, 0.8);
  CounterRng rng(11, 0);
  for (int trial = 0; trial < 25; ++trial) {
    Vec w = rng.gauss_vec(4);
    const double gnorm = obj->grad(w, Batch::none()).norm();
    if (gnorm < 1e-8) continue;
    LeSamConfig cfg;
    cfg.sigma0 = 0.2;
    cfg.lr = 0.05;
    const double rho = cfg.sigma0 / (gnorm + cfg.varrho);
    auto lesam = optim::lesam_step(*obj, w, Batch::none(), cfg,
                                   optim::make_state(Algo::kLeSam), 0);
    auto sam = optim::sam_step(*obj, w, Batch::none(), rho, cfg,
                               optim::make_state(Algo::kSam));
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(lesam.w[k], sam.w[k], 1e-12);
  }
}

TEST(LesamPlus, AlphaZeroIsPlainLesam) {
  auto obj = unit_quadratic(2);
  LeSamConfig cfg;
  cfg.sigma0 = 0.3;
  Vec w = Vec::Constant(2, 1.5);
  auto plus = optim::lesam_plus_step(*obj, w, Batch::none(), cfg, 0.0,
                                     optim::make_state(Algo::kLeSamPlus), 0);
  auto plain = optim::lesam_step(*obj, w, Batch::none(), cfg,
                                 optim::make_state(Algo::kLeSam), 0);
  for (int k = 0; k < 2; ++k) EXPECT_EQ(plus.w[k], plain.w[k]);
}

TEST(LesamPlus, UpdateIsExtrapolatedGradient) {
  // Recover the update from the parameter delta and compare against
  // (1 + alpha) ghat - alpha g for the documented presets.
  auto obj = unit_quadratic(3, 2.0);
  for (auto [alpha, sigma] : {std::pair{0.5, 0.15}, {0.55, 0.2}, {0.6, 0.25}}) {
    LeSamConfig cfg;
    cfg.sigma0 = sigma;
    cfg.lr = 0.05;
    Vec w(3);
    w << 1.0, -0.5, 2.0;
    Vec g = obj->grad(w, Batch::none());
    auto r = optim::lesam_plus_step(*obj, w, Batch::none(), cfg, alpha,
                                    optim::make_state(Algo::kLeSamPlus), 0);
    ASSERT_TRUE(r.report.perturb.has_value());
    Vec ghat = obj->grad(Vec(w + r.report.perturb->epsilon), Batch::none());
    Vec expected = (1.0 + alpha) * ghat - alpha * g;
    Vec update = (w - r.w) / cfg.lr;
    EXPECT_LT((update - expected).norm(), 1e-12 * std::max(1.0, expected.norm()));
  }
}

TEST(AsamPerturb, ScalesByWeightMagnitude) {
  Vec w(2), g(2);
  w << 2.0, 1.0;
  g << 1.0, 1.0;
  // T_w^2 g = (4, 1); ||T_w g|| = sqrt(5); eps = rho (4, 1)/sqrt(5).
  Vec eps = optim::asam_perturb(w, g, 1.0);
  EXPECT_NEAR(eps[0], 4.0 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(eps[1], 1.0 / std::sqrt(5.0), 1e-15);
}

TEST(AsamPerturb, ZeroScaledGradientThrows) {
  // w = 0 kills T_w g even though g is nonzero.
  try {
    optim::asam_perturb(Vec::Zero(2), Vec::Constant(2, 1.0), 0.1);
    FAIL() << "expected ZeroDirection";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::zero_direction);
  }
}

TEST(GsamCombine, SubtractsOrthogonalComponent) {
  Vec g(2), ghat(2);
  g << 1.0, 0.0;
  ghat << 0.0, 1.0;
  Vec update = optim::gsam_combine(g, ghat, 1.0);
  EXPECT_NEAR(update[0], -1.0, 1e-15);
  EXPECT_NEAR(update[1], 1.0, 1e-15);
  // alpha = 0 leaves ghat untouched.
  Vec same = optim::gsam_combine(g, ghat, 0.0);
  EXPECT_EQ(same[0], 0.0);
  EXPECT_EQ(same[1], 1.0);
}

TEST(SsamRescale, RestoresCenterGradientNorm) {
  Vec g(2), ghat(2);
  g << 3.0, 4.0;
  ghat << 0.0, 2.0;
  Vec update = optim::ssam_rescale(g, ghat);
  EXPECT_NEAR(update[0], 0.0, 1e-15);
  EXPECT_NEAR(update[1], 5.0, 1e-15);
}

TEST(FsamPerturb, ResidualUsesPreUpdateEma) {
  Vec g(2), ema(2);
  g << 1.0, 0.0;
  ema << 0.0, 1.0;
  auto [eps, next_ema] = optim::fsam_perturb(g, ema, 0.5, 0.9);
  // Residual g - ema = (1, -1); eps = 0.5 * residual / sqrt(2).
  EXPECT_NEAR(eps[0], 0.5 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(eps[1], -0.5 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(next_ema[0], 0.1, 1e-15);
  EXPECT_NEAR(next_ema[1], 0.9, 1e-15);
}

TEST(FsamPerturb, ZeroResidualFallsBackToSamDirection) {
  Vec g(2);
  g << 3.0, 4.0;
  auto [eps, next_ema] = optim::fsam_perturb(g, g, 0.1, 0.9);
  EXPECT_NEAR(eps[0], 0.06, 1e-15);
  EXPECT_NEAR(eps[1], 0.08, 1e-15);
  EXPECT_EQ(next_ema[0], 3.0);
}

TEST(FsamPerturb, DecayZeroTracksGradientExactly) {
  Vec g(1), ema(1);
  g << 2.0;
  ema << -1.0;
  auto [eps, next_ema] = optim::fsam_perturb(g, ema, 0.1, 0.0);
  EXPECT_EQ(next_ema[0], 2.0);
  EXPECT_NEAR(eps[0], 0.1, 1e-15);
}

TEST(MsamPerturb, FollowsMomentumBuffer) {
  Vec buf(2);
  buf << 0.6, 0.8;
  Vec eps = optim::msam_perturb(buf, 0.1, false);
  EXPECT_NEAR(eps[0], 0.06, 1e-15);
  EXPECT_NEAR(eps[1], 0.08, 1e-15);
  Vec neg = optim::msam_perturb(buf, 0.1, true);
  EXPECT_NEAR(neg[0], -0.06, 1e-15);
  EXPECT_THROW(optim::msam_perturb(Vec::Zero(2), 0.1, false), Error);
}

TEST(EigenSamPerturb, MixesTopEigenvectorWithSignFix) {
  testbed::QuadraticSpec spec;
  spec.diag_a = Vec(2);
  spec.diag_a << 10.0, 1.0;
  spec.center = Vec::Zero(2);
  auto obj = testbed::make_quadratic(spec);
  Vec w(2);
  w << 1.0, 1.0;
  Vec g = obj->grad(w, Batch::none());
  auto [eps, v1] = optim::eigensam_perturb(*obj, w, Batch::none(), g, 0.1, 0.5,
                                           std::nullopt, 100, 0);
  // Dominant eigenvector is +-e1; the sign convention folds it toward g.
  EXPECT_GT(eps[0], 0.0);
  Vec dir = 0.5 * g / g.norm() + 0.5 * Vec::Unit(2, 0);
  Vec expect = 0.1 * dir / dir.norm();
  EXPECT_LT((eps - expect).norm(), 1e-3);
  EXPECT_NEAR(eps.norm(), 0.1, 1e-12);
  EXPECT_NEAR(std::abs(v1[0]), 1.0, 1e-3);
}

TEST(EigenSamPerturb, BetaZeroIsExactlySam) {
  auto obj = unit_quadratic(3, 2.0);
  Vec w(3);
  w << 0.2, -1.0, 0.5;
  Vec g = obj->grad(w, Batch::none());
  auto [eps, v1] = optim::eigensam_perturb(*obj, w, Batch::none(), g, 0.07, 0.0,
                                           std::nullopt, 100, 0);
  Vec sam = optim::sam_perturb(g, 0.07);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(eps[k], sam[k]);
}

TEST(EigenSamPerturb, CachedVectorSkipsRefresh) {
  auto quad = unit_quadratic(2, 3.0);
  auto counted = std::make_shared<numcore::CountingObjective>(quad);
  Vec w(2);
  w << 1.0, 2.0;
  Vec g = quad->grad(w, Batch::none());
  Vec cached = Vec::Unit(2, 0);
  // step_count 5 with refresh_every 100: reuse the cache, no HVPs.
  auto [eps, v1] = optim::eigensam_perturb(*counted, w, Batch::none(), g, 0.1, 0.5,
                                           cached, 100, 5);
  EXPECT_EQ(counted->hvp_evals(), 0);
  EXPECT_EQ(v1[0], cached[0]);
  // step_count 100 triggers a refresh.
  auto [eps2, v2] = optim::eigensam_perturb(*counted, w, Batch::none(), g, 0.1, 0.5,
                                            cached, 100, 100);
  EXPECT_GT(counted->hvp_evals(), 0);
  (void)eps2;
  (void)v2;
}

TEST(Dispatcher, KnownNamesRoundTrip) {
  for (Algo a : {Algo::kSgd, Algo::kPolyak, Algo::kSam, Algo::kLeSam, Algo::kLeSamPlus,
                 Algo::kAsam, Algo::kGsam, Algo::kSsam, Algo::kFsam, Algo::kMsam,
                 Algo::kEigenSam}) {
    auto round = optim::algo_from_name(optim::algo_name(a));
    ASSERT_TRUE(round.has_value());
    EXPECT_EQ(*round, a);
  }
  EXPECT_FALSE(optim::algo_from_name("adam").has_value());
}

TEST(Dispatcher, GradEvalCountsPerAlgorithm) {
  for (Algo a : {Algo::kSgd, Algo::kPolyak, Algo::kSam, Algo::kLeSam, Algo::kLeSamPlus,
                 Algo::kAsam, Algo::kGsam, Algo::kSsam, Algo::kFsam, Algo::kMsam,
                 Algo::kEigenSam}) {
    auto counted = std::make_shared<numcore::CountingObjective>(unit_quadratic(2, 2.0));
    OptimizerConfig cfg;
    cfg.algo = a;
    cfg.base.lr = 0.01;
    cfg.base.momentum = 0.9;  // gives MSAM a live buffer after step one
    cfg.eigensam_refresh_every = 1000;  // refresh only on the first step
    OptimizerState state = optim::make_state(a);
    Vec w = Vec::Constant(2, 1.0);
    for (int i = 0; i < 5; ++i) {
      auto r = optim::step(*counted, w, Batch::none(), cfg, std::move(state), 0);
      w = std::move(r.w);
      state = std::move(r.state);
    }
    const long expected = optim::is_two_pass(a) ? 10 : 5;
    EXPECT_EQ(counted->grad_evals(), expected) << optim::algo_name(a);
    EXPECT_EQ(state.step_count, 5);
  }
}

TEST(Dispatcher, PerturbReportPresence) {
  auto obj = unit_quadratic(2);
  Vec w = Vec::Constant(2, 1.0);
  OptimizerConfig sgd;
  sgd.algo = Algo::kSgd;
  auto r_sgd = optim::step(*obj, w, Batch::none(), sgd, optim::make_state(Algo::kSgd), 0);
  EXPECT_FALSE(r_sgd.report.perturb.has_value());
  EXPECT_FALSE(r_sgd.report.loss_perturbed.has_value());
  EXPECT_GT(r_sgd.report.grad_norm, 0.0);

  OptimizerConfig sam;
  sam.algo = Algo::kSam;
  auto r_sam = optim::step(*obj, w, Batch::none(), sam, optim::make_state(Algo::kSam), 0);
  ASSERT_TRUE(r_sam.report.perturb.has_value());
  EXPECT_FALSE(r_sam.report.perturb->sigma_t.has_value());
  EXPECT_FALSE(r_sam.report.perturb->was_clipped);

  OptimizerConfig lesam;
  lesam.algo = Algo::kLeSam;
  auto r_le = optim::step(*obj, w, Batch::none(), lesam, optim::make_state(Algo::kLeSam), 0);
  ASSERT_TRUE(r_le.report.perturb.has_value());
  EXPECT_TRUE(r_le.report.perturb->sigma_t.has_value());
  EXPECT_NEAR(r_le.report.update_norm, (r_le.w - w).norm(), 0.0);
}

TEST(Dispatcher, MsamColdStartUsesSamDirection) {
  auto obj = unit_quadratic(2);
  OptimizerConfig msam;
  msam.algo = Algo::kMsam;
  msam.rho = 0.05;
  msam.base.momentum = 0.0;  // buffer never materializes
  Vec w = Vec::Constant(2, 1.0);
  auto r = optim::step(*obj, w, Batch::none(), msam, optim::make_state(Algo::kMsam), 0);
  ASSERT_TRUE(r.report.perturb.has_value());
  Vec g = obj->grad(w, Batch::none());
  Vec sam_eps = optim::sam_perturb(g, 0.05);
  EXPECT_LT((r.report.perturb->epsilon - sam_eps).norm(), 1e-15);
}

TEST(Dispatcher, FsamFirstStepMatchesSam) {
  auto obj = unit_quadratic(2);
  OptimizerConfig fsam;
  fsam.algo = Algo::kFsam;
  fsam.rho = 0.05;
  OptimizerConfig sam;
  sam.algo = Algo::kSam;
  sam.rho = 0.05;
  Vec w = Vec::Constant(2, 1.0);
  auto r_f = optim::step(*obj, w, Batch::none(), fsam, optim::make_state(Algo::kFsam), 0);
  auto r_s = optim::step(*obj, w, Batch::none(), sam, optim::make_state(Algo::kSam), 0);
  for (int k = 0; k < 2; ++k) EXPECT_EQ(r_f.w[k], r_s.w[k]);
  ASSERT_TRUE(r_f.state.ema_grad.has_value());
  EXPECT_EQ((*r_f.state.ema_grad)[0], obj->grad(w, Batch::none())[0]);
}

TEST(MinNorm, BudgetPerturbationHasSmallestNorm) {
  // Any direction matching the first-order budget needs at least ||eps||.
  CounterRng rng(600, 1);
  auto obj = unit_quadratic(5, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    Vec w = rng.gauss_vec(5);
    Vec g = obj->grad(w, Batch::none());
    const double gn = g.norm();
    if (gn < 1e-6) continue;
    const double sigma = 0.3;
    auto ps = optim::lesam_radius(sigma, gn, 1e-12, optim::kNoClip);
    Vec eps = g * (ps.rho_clipped / gn);
    for (int k = 0; k < 10; ++k) {
      Vec u = rng.gauss_vec(5);
      const double along = g.dot(u);
      if (std::abs(along) < 1e-9) continue;
      Vec delta = u * (sigma / along);  // same first-order increase
      EXPECT_GE(delta.norm(), eps.norm() - 1e-12);
    }
  }
}

TEST(Invariance, LesamFirstOrderIncreaseIgnoresLossScale) {
  // Scaling the loss by c scales SAM's g^T eps by c; LE-SAM's stays at sigma.
  Vec w(3);
  w << 1.0, -2.0, 0.5;
  const double sigma = 0.35, rho = 0.05;
  Vec g_base(3);
  g_base << 0.4, -0.3, 0.8;
  const double base_sam = rho * g_base.norm();
  const auto base_ps = optim::lesam_radius(sigma, g_base.norm(), 1e-12, optim::kNoClip);
  const double base_lesam = g_base.dot(optim::sam_perturb(g_base, base_ps.rho_clipped));
  for (double c : {0.1, 10.0}) {
    Vec g = c * g_base;
    const double sam_inc = rho * g.norm();
    EXPECT_NEAR(sam_inc / base_sam, c, 1e-12 * c);
    auto ps = optim::lesam_radius(sigma, g.norm(), 1e-12, optim::kNoClip);
    const double lesam_inc = g.dot(g * (ps.rho_clipped / g.norm()));
    EXPECT_NEAR(lesam_inc, base_lesam, 1e-6 * base_lesam);
  }
}

TEST(SecondOrder, PerturbedLossMatchesTaylorOnQuadratic) {
  // For quadratics the expansion is exact: L(w+e) - L(w) = g.e + 0.5 e^T H e.
  testbed::QuadraticSpec spec;
  spec.diag_a = Vec(3);
  spec.diag_a << 2.0, 1.0, 0.5;
  spec.center = Vec::Zero(3);
  auto obj = testbed::make_quadratic(spec);
  LeSamConfig cfg;
  cfg.sigma0 = 0.05;
  Vec w(3);
  w << 1.0, 2.0, -1.0;
  auto r = optim::lesam_step(*obj, w, Batch::none(), cfg, optim::make_state(Algo::kLeSam), 0);
  ASSERT_TRUE(r.report.perturb.has_value());
  const Vec& eps = r.report.perturb->epsilon;
  Vec g = obj->grad(w, Batch::none());
  const double predicted = g.dot(eps) + 0.5 * eps.dot(obj->hvp_analytic(w, eps, Batch::none()));
  EXPECT_NEAR(*r.report.loss_perturbed - r.report.loss_center, predicted, 1e-10);
}

TEST(OptimizerConfig, RejectsBadSettings) {
  OptimizerConfig cfg;
  cfg.base.lr = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = OptimizerConfig{};
  cfg.base.momentum = 1.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = OptimizerConfig{};
  cfg.base.sigma0 = -0.1;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = OptimizerConfig{};
  cfg.base.varrho = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = OptimizerConfig{};
  cfg.rho = -1.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = OptimizerConfig{};
  cfg.base.anneal_len_epochs = 5;
  cfg.base.total_epochs = 3;
  EXPECT_THROW(cfg.validate(), Error);
}

}  // namespace
}  // namespace lesam
