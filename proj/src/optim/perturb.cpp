#include "optim/perturb.hpp"

#include <cmath>

#include "curvature/spectrum.hpp"
#include "numcore/rng.hpp"

namespace lesam::optim {

Vec sam_perturb(const Vec& g, double rho) {
  if (rho < 0.0) throw Error(Errc::invalid_argument, "sam_perturb: negative rho");
  double n = g.norm();
  if (n == 0.0) throw Error(Errc::zero_direction, "sam_perturb: zero gradient");
  return g * (rho / n);
}

PerturbState lesam_radius(double sigma_t, double grad_norm, double varrho, double rho_max) {
  if (sigma_t < 0.0) throw Error(Errc::invalid_argument, "lesam_radius: negative sigma_t");
  if (grad_norm < 0.0) throw Error(Errc::invalid_argument, "lesam_radius: negative grad_norm");
  if (varrho <= 0.0) throw Error(Errc::invalid_argument, "lesam_radius: varrho must be positive");
  if (rho_max <= 0.0) throw Error(Errc::invalid_argument, "lesam_radius: rho_max must be positive");
  PerturbState ps;
  ps.sigma_t = sigma_t;
  ps.grad_norm = grad_norm;
  ps.rho_raw = sigma_t / (grad_norm + varrho);
  ps.was_clipped = ps.rho_raw > rho_max;
  ps.rho_clipped = ps.was_clipped ? rho_max : ps.rho_raw;
  return ps;
}

Vec asam_perturb(const Vec& w, const Vec& g, double rho) {
  numcore::require_same_dim(w, g, "asam_perturb");
  if (rho < 0.0) throw Error(Errc::invalid_argument, "asam_perturb: negative rho");
  Vec tg = w.array().abs() * g.array();
  double n = tg.norm();
  if (n == 0.0) throw Error(Errc::zero_direction, "asam_perturb: T_w g is zero");
  Vec t2g = w.array().square() * g.array();
  return t2g * (rho / n);
}

Vec gsam_combine(const Vec& g, const Vec& ghat, double alpha) {
  numcore::require_same_dim(g, ghat, "gsam_combine");
  double n2 = ghat.squaredNorm();
  if (n2 == 0.0) throw Error(Errc::zero_direction, "gsam_combine: zero perturbed gradient");
  Vec g_perp = g - ghat * (g.dot(ghat) / n2);
  return ghat - alpha * g_perp;
}

Vec ssam_rescale(const Vec& g, const Vec& ghat) {
  numcore::require_same_dim(g, ghat, "ssam_rescale");
  double n = ghat.norm();
  if (n == 0.0) throw Error(Errc::zero_direction, "ssam_rescale: zero perturbed gradient");
  return ghat * (g.norm() / n);
}

std::pair<Vec, Vec> fsam_perturb(const Vec& g, const Vec& ema, double rho, double decay) {
  numcore::require_same_dim(g, ema, "fsam_perturb");
  if (decay < 0.0 || decay >= 1.0) throw Error(Errc::invalid_argument, "fsam_perturb: decay outside [0,1)");
  Vec residual = g - ema;
  Vec next_ema = decay * ema + (1.0 - decay) * g;
  double n = residual.norm();
  Vec eps = (n > 0.0) ? Vec(residual * (rho / n)) : sam_perturb(g, rho);
  return {std::move(eps), std::move(next_ema)};
}

Vec msam_perturb(const Vec& momentum_buf, double rho, bool negate) {
  if (rho < 0.0) throw Error(Errc::invalid_argument, "msam_perturb: negative rho");
  double n = momentum_buf.norm();
  if (n == 0.0) throw Error(Errc::zero_direction, "msam_perturb: zero momentum buffer");
  double s = negate ? -rho : rho;
  return momentum_buf * (s / n);
}

std::pair<Vec, Vec> eigensam_perturb(const Objective& obj, const Vec& w, const Batch& b,
                                     const Vec& g, double rho, double beta,
                                     const std::optional<Vec>& cached_eigvec,
                                     int refresh_every, long step_count) {
  if (beta < 0.0 || beta > 1.0) throw Error(Errc::invalid_argument, "eigensam_perturb: beta outside [0,1]");
  if (refresh_every < 1) throw Error(Errc::invalid_argument, "eigensam_perturb: refresh_every < 1");
  Vec v1;
  if (!cached_eigvec.has_value() || step_count % refresh_every == 0) {
    curvature::SpectrumOptions opts;
    opts.k = 1;
    opts.max_iters = 50;
    opts.tol = 1e-4;
    opts.seed = numcore::mix_seed(0x51C3ull, static_cast<std::uint64_t>(step_count));
    auto spec = curvature::power_iteration_topk(obj, w, b, opts);
    v1 = spec.eigenvectors.front();
  } else {
    v1 = *cached_eigvec;
  }
  if (beta == 0.0) return {sam_perturb(g, rho), std::move(v1)};
  double gn = g.norm();
  if (gn == 0.0) throw Error(Errc::zero_direction, "eigensam_perturb: zero gradient");
  double sign = (v1.dot(g) >= 0.0) ? 1.0 : -1.0;
  Vec mix = (1.0 - beta) * (g / gn) + beta * sign * v1;
  double mn = mix.norm();
  if (mn == 0.0) throw Error(Errc::zero_direction, "eigensam_perturb: degenerate mixed direction");
  return {Vec(mix * (rho / mn)), std::move(v1)};
}

}  // namespace lesam::optim
