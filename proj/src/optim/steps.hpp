#pragma once

#include <utility>

#include "optim/types.hpp"

namespace lesam::optim {

// Momentum SGD with coupled weight decay applied at the center weights:
// gt = g + wd * w; buf = momentum * buf + gt; w' = w - lr * buf.
// The momentum buffer materializes only when momentum > 0.
std::pair<Vec, OptimizerState> sgd_step(const Vec& w, const Vec& g, OptimizerState state,
                                        double lr, double momentum, double weight_decay);

// Polyak step size: w' = w - (f_val - f_star) / ||g||^2 * g.
Vec polyak_step(const Vec& w, const Vec& g, double f_val, double f_star);

StepResult sam_step(const Objective& obj, const Vec& w, const Batch& b, double rho,
                    const LeSamConfig& base, OptimizerState state);

// Loss-budget step: anneal sigma, back-solve the radius from the center
// gradient norm, clip, evaluate the perturbed gradient, apply the base
// optimizer. Exactly two gradient evaluations.
StepResult lesam_step(const Objective& obj, const Vec& w, const Batch& b,
                      const LeSamConfig& cfg, OptimizerState state, int epoch);

// Curvature-regularized variant: descend (1 + alpha) * ghat - alpha * g.
StepResult lesam_plus_step(const Objective& obj, const Vec& w, const Batch& b,
                           const LeSamConfig& cfg, double alpha, OptimizerState state, int epoch);

// Algorithm dispatch used by the harness; `epoch` feeds the sigma schedule.
StepResult step(const Objective& obj, const Vec& w, const Batch& b, const OptimizerConfig& cfg,
                OptimizerState state, int epoch);

}  // namespace lesam::optim
