#include "optim/steps.hpp"

#include <cmath>

#include "optim/perturb.hpp"
#include "optim/schedule.hpp"

namespace lesam::optim {

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::kSgd: return "sgd";
    case Algo::kPolyak: return "polyak";
    case Algo::kSam: return "sam";
    case Algo::kLeSam: return "lesam";
    case Algo::kLeSamPlus: return "lesam_plus";
    case Algo::kAsam: return "asam";
    case Algo::kGsam: return "gsam";
    case Algo::kSsam: return "ssam";
    case Algo::kFsam: return "fsam";
    case Algo::kMsam: return "msam";
    case Algo::kEigenSam: return "eigensam";
  }
  return "unknown";
}

std::optional<Algo> algo_from_name(const std::string& name) {
  for (Algo a : {Algo::kSgd, Algo::kPolyak, Algo::kSam, Algo::kLeSam, Algo::kLeSamPlus,
                 Algo::kAsam, Algo::kGsam, Algo::kSsam, Algo::kFsam, Algo::kMsam, Algo::kEigenSam}) {
    if (name == algo_name(a)) return a;
  }
  return std::nullopt;
}

bool is_two_pass(Algo a) { return a != Algo::kSgd && a != Algo::kPolyak; }

bool uses_loss_budget(Algo a) { return a == Algo::kLeSam || a == Algo::kLeSamPlus; }

void LeSamConfig::validate() const {
  if (sigma0 < 0.0) throw Error(Errc::validation_error, "optimizer: sigma0 must be >= 0");
  if (varrho <= 0.0) throw Error(Errc::validation_error, "optimizer: varrho must be > 0");
  if (rho_max <= 0.0) throw Error(Errc::validation_error, "optimizer: rho_max must be > 0");
  if (total_epochs < 1) throw Error(Errc::validation_error, "optimizer: total_epochs must be >= 1");
  if (anneal_len_epochs < 0 || anneal_len_epochs > total_epochs) {
    throw Error(Errc::validation_error, "optimizer: anneal window must lie inside [0, total_epochs]");
  }
  if (lr <= 0.0) throw Error(Errc::validation_error, "optimizer: lr must be > 0");
  if (momentum < 0.0 || momentum >= 1.0) {
    throw Error(Errc::validation_error, "optimizer: momentum must lie in [0, 1)");
  }
  if (weight_decay < 0.0) throw Error(Errc::validation_error, "optimizer: weight_decay must be >= 0");
}

void OptimizerConfig::validate() const {
  base.validate();
  if (rho < 0.0) throw Error(Errc::validation_error, "optimizer: rho must be >= 0");
  if (plus_alpha < 0.0) throw Error(Errc::validation_error, "optimizer: alpha must be >= 0");
  if (fsam_decay < 0.0 || fsam_decay >= 1.0) {
    throw Error(Errc::validation_error, "optimizer: fsam_decay must lie in [0, 1)");
  }
  if (eigensam_beta < 0.0 || eigensam_beta > 1.0) {
    throw Error(Errc::validation_error, "optimizer: eigensam_beta must lie in [0, 1]");
  }
  if (eigensam_refresh_every < 1) {
    throw Error(Errc::validation_error, "optimizer: eigensam_refresh must be >= 1");
  }
}

namespace {

// Shared base-optimizer application; mutates the momentum buffer.
Vec apply_base_update(const Vec& w, const Vec& update_grad, OptimizerState& state,
                      const LeSamConfig& base) {
  Vec gt = (base.weight_decay != 0.0) ? Vec(update_grad + base.weight_decay * w) : update_grad;
  if (base.momentum != 0.0) {
    if (!state.momentum_buf.has_value()) state.momentum_buf = Vec::Zero(w.size());
    *state.momentum_buf = base.momentum * (*state.momentum_buf) + gt;
    return w - base.lr * (*state.momentum_buf);
  }
  return w - base.lr * gt;
}

struct PassOne {
  double loss_center;
  Vec g;
  double grad_norm;
};

PassOne first_pass(const Objective& obj, const Vec& w, const Batch& b) {
  PassOne p{obj.loss(w, b), numcore::eval_grad(obj, w, b), 0.0};
  p.grad_norm = p.g.norm();
  return p;
}

// Finishes any two-pass step: evaluate at w + eps, assemble the update
// gradient, apply the base optimizer.
StepResult second_pass(const Objective& obj, const Vec& w, const Batch& b,
                       const LeSamConfig& base, OptimizerState state, PassOne p,
                       PerturbState ps, const Vec* update_override = nullptr,
                       double plus_alpha = 0.0, bool lesam_plus = false,
                       bool gsam = false, double gsam_alpha = 0.0, bool ssam = false) {
  bool moved = ps.epsilon.size() > 0 && ps.rho_clipped > 0.0 && ps.epsilon.squaredNorm() > 0.0;
  Vec w_pert = moved ? Vec(w + ps.epsilon) : w;
  if (!moved && ps.epsilon.size() == 0) ps.epsilon = Vec::Zero(w.size());
  double loss_pert = obj.loss(w_pert, b);
  Vec ghat = numcore::eval_grad(obj, w_pert, b);

  Vec update;
  if (update_override != nullptr) {
    update = *update_override;
  } else if (lesam_plus) {
    update = (1.0 + plus_alpha) * ghat - plus_alpha * p.g;
  } else if (gsam) {
    update = (ghat.squaredNorm() > 0.0) ? gsam_combine(p.g, ghat, gsam_alpha) : ghat;
  } else if (ssam) {
    update = (ghat.squaredNorm() > 0.0) ? ssam_rescale(p.g, ghat) : ghat;
  } else {
    update = ghat;
  }

  Vec w_next = apply_base_update(w, update, state, base);
  state.step_count += 1;

  StepResult out;
  out.report.loss_center = p.loss_center;
  out.report.loss_perturbed = loss_pert;
  out.report.grad_norm = p.grad_norm;
  out.report.update_norm = (w_next - w).norm();
  out.report.perturb = std::move(ps);
  out.w = std::move(w_next);
  out.state = std::move(state);
  return out;
}

PerturbState fixed_radius_state(double rho, const PassOne& p, Vec eps) {
  PerturbState ps;
  ps.sigma_t = std::nullopt;
  ps.grad_norm = p.grad_norm;
  ps.rho_raw = rho;
  ps.rho_clipped = rho;
  ps.was_clipped = false;
  ps.epsilon = std::move(eps);
  return ps;
}

}  // namespace

std::pair<Vec, OptimizerState> sgd_step(const Vec& w, const Vec& g, OptimizerState state,
                                        double lr, double momentum, double weight_decay) {
  numcore::require_same_dim(w, g, "sgd_step");
  LeSamConfig base;
  base.lr = lr;
  base.momentum = momentum;
  base.weight_decay = weight_decay;
  Vec w_next = apply_base_update(w, g, state, base);
  state.step_count += 1;
  return {std::move(w_next), std::move(state)};
}

Vec polyak_step(const Vec& w, const Vec& g, double f_val, double f_star) {
  numcore::require_same_dim(w, g, "polyak_step");
  if (f_val < f_star) throw Error(Errc::invalid_argument, "polyak_step: f_val below f_star");
  double n2 = g.squaredNorm();
  if (n2 == 0.0) {
    if (f_val == f_star) return w;
    throw Error(Errc::zero_direction, "polyak_step: zero gradient above the target level");
  }
  double alpha = (f_val - f_star) / n2;
  return w - alpha * g;
}

StepResult sam_step(const Objective& obj, const Vec& w, const Batch& b, double rho,
                    const LeSamConfig& base, OptimizerState state) {
  PassOne p = first_pass(obj, w, b);
  Vec eps = (p.grad_norm > 0.0 && rho > 0.0) ? Vec(p.g * (rho / p.grad_norm)) : Vec::Zero(w.size());
  PerturbState ps = fixed_radius_state(rho, p, std::move(eps));
  return second_pass(obj, w, b, base, std::move(state), std::move(p), std::move(ps));
}

StepResult lesam_step(const Objective& obj, const Vec& w, const Batch& b,
                      const LeSamConfig& cfg, OptimizerState state, int epoch) {
  cfg.validate();
  PassOne p = first_pass(obj, w, b);
  double sigma_t = cosine_anneal_sigma(cfg.sigma0, static_cast<double>(epoch),
                                       cfg.anneal_len_epochs, cfg.total_epochs);
  PerturbState ps = lesam_radius(sigma_t, p.grad_norm, cfg.varrho, cfg.rho_max);
  ps.epsilon = (p.grad_norm > 0.0 && ps.rho_clipped > 0.0)
                   ? Vec(p.g * (ps.rho_clipped / p.grad_norm))
                   : Vec::Zero(w.size());
  return second_pass(obj, w, b, cfg, std::move(state), std::move(p), std::move(ps));
}

StepResult lesam_plus_step(const Objective& obj, const Vec& w, const Batch& b,
                           const LeSamConfig& cfg, double alpha, OptimizerState state, int epoch) {
  cfg.validate();
  if (alpha < 0.0) throw Error(Errc::invalid_argument, "lesam_plus_step: negative alpha");
  PassOne p = first_pass(obj, w, b);
  double sigma_t = cosine_anneal_sigma(cfg.sigma0, static_cast<double>(epoch),
                                       cfg.anneal_len_epochs, cfg.total_epochs);
  PerturbState ps = lesam_radius(sigma_t, p.grad_norm, cfg.varrho, cfg.rho_max);
  ps.epsilon = (p.grad_norm > 0.0 && ps.rho_clipped > 0.0)
                   ? Vec(p.g * (ps.rho_clipped / p.grad_norm))
                   : Vec::Zero(w.size());
  return second_pass(obj, w, b, cfg, std::move(state), std::move(p), std::move(ps), nullptr,
                     alpha, /*lesam_plus=*/true);
}

StepResult step(const Objective& obj, const Vec& w, const Batch& b, const OptimizerConfig& cfg,
                OptimizerState state, int epoch) {
  cfg.validate();
  switch (cfg.algo) {
    case Algo::kSgd: {
      double loss = obj.loss(w, b);
      Vec g = numcore::eval_grad(obj, w, b);
      auto [w_next, state_next] = sgd_step(w, g, std::move(state), cfg.base.lr,
                                           cfg.base.momentum, cfg.base.weight_decay);
      StepResult out;
      out.report.loss_center = loss;
      out.report.grad_norm = g.norm();
      out.report.update_norm = (w_next - w).norm();
      out.w = std::move(w_next);
      out.state = std::move(state_next);
      return out;
    }
    case Algo::kPolyak: {
      double loss = obj.loss(w, b);
      Vec g = numcore::eval_grad(obj, w, b);
      Vec w_next = polyak_step(w, g, loss, cfg.polyak_fstar);
      state.step_count += 1;
      StepResult out;
      out.report.loss_center = loss;
      out.report.grad_norm = g.norm();
      out.report.update_norm = (w_next - w).norm();
      out.w = std::move(w_next);
      out.state = std::move(state);
      return out;
    }
    case Algo::kSam:
      return sam_step(obj, w, b, cfg.rho, cfg.base, std::move(state));
    case Algo::kLeSam:
      return lesam_step(obj, w, b, cfg.base, std::move(state), epoch);
    case Algo::kLeSamPlus:
      return lesam_plus_step(obj, w, b, cfg.base, cfg.plus_alpha, std::move(state), epoch);
    case Algo::kAsam: {
      PassOne p = first_pass(obj, w, b);
      Vec eps;
      if (cfg.rho > 0.0 && (w.array().abs() * p.g.array()).matrix().norm() > 0.0) {
        eps = asam_perturb(w, p.g, cfg.rho);
      } else {
        eps = Vec::Zero(w.size());
      }
      PerturbState ps = fixed_radius_state(cfg.rho, p, std::move(eps));
      return second_pass(obj, w, b, cfg.base, std::move(state), std::move(p), std::move(ps));
    }
    case Algo::kGsam: {
      PassOne p = first_pass(obj, w, b);
      Vec eps = (p.grad_norm > 0.0 && cfg.rho > 0.0) ? Vec(p.g * (cfg.rho / p.grad_norm))
                                                     : Vec::Zero(w.size());
      PerturbState ps = fixed_radius_state(cfg.rho, p, std::move(eps));
      return second_pass(obj, w, b, cfg.base, std::move(state), std::move(p), std::move(ps),
                         nullptr, 0.0, false, /*gsam=*/true, cfg.gsam_alpha);
    }
    case Algo::kSsam: {
      PassOne p = first_pass(obj, w, b);
      Vec eps = (p.grad_norm > 0.0 && cfg.rho > 0.0) ? Vec(p.g * (cfg.rho / p.grad_norm))
                                                     : Vec::Zero(w.size());
      PerturbState ps = fixed_radius_state(cfg.rho, p, std::move(eps));
      return second_pass(obj, w, b, cfg.base, std::move(state), std::move(p), std::move(ps),
                         nullptr, 0.0, false, false, 0.0, /*ssam=*/true);
    }
    case Algo::kFsam: {
      PassOne p = first_pass(obj, w, b);
      Vec eps;
      if (p.grad_norm > 0.0 && cfg.rho > 0.0) {
        if (!state.ema_grad.has_value()) state.ema_grad = p.g;  // first step: EMA = first gradient
        auto [e, next_ema] = fsam_perturb(p.g, *state.ema_grad, cfg.rho, cfg.fsam_decay);
        eps = std::move(e);
        state.ema_grad = std::move(next_ema);
      } else {
        eps = Vec::Zero(w.size());
      }
      PerturbState ps = fixed_radius_state(cfg.rho, p, std::move(eps));
      return second_pass(obj, w, b, cfg.base, std::move(state), std::move(p), std::move(ps));
    }
    case Algo::kMsam: {
      PassOne p = first_pass(obj, w, b);
      Vec eps;
      bool have_buf = state.momentum_buf.has_value() && state.momentum_buf->squaredNorm() > 0.0;
      if (cfg.rho > 0.0 && have_buf) {
        eps = msam_perturb(*state.momentum_buf, cfg.rho, cfg.msam_negate);
      } else if (cfg.rho > 0.0 && p.grad_norm > 0.0) {
        eps = p.g * (cfg.rho / p.grad_norm);  // cold start: no buffer direction yet
      } else {
        eps = Vec::Zero(w.size());
      }
      PerturbState ps = fixed_radius_state(cfg.rho, p, std::move(eps));
      return second_pass(obj, w, b, cfg.base, std::move(state), std::move(p), std::move(ps));
    }
    case Algo::kEigenSam: {
      PassOne p = first_pass(obj, w, b);
      Vec eps;
      if (cfg.rho > 0.0 && p.grad_norm > 0.0) {
        auto [e, v1] = eigensam_perturb(obj, w, b, p.g, cfg.rho, cfg.eigensam_beta,
                                        state.cached_eigvec, cfg.eigensam_refresh_every,
                                        state.step_count);
        eps = std::move(e);
        state.cached_eigvec = std::move(v1);
      } else {
        eps = Vec::Zero(w.size());
      }
      PerturbState ps = fixed_radius_state(cfg.rho, p, std::move(eps));
      return second_pass(obj, w, b, cfg.base, std::move(state), std::move(p), std::move(ps));
    }
  }
  throw Error(Errc::internal, "step: unhandled algorithm");
}

}  // namespace lesam::optim
