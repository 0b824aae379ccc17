#pragma once

#include <cstdint>
#include <utility>

#include "optim/types.hpp"

namespace lesam::optim {

// Fixed-radius ascent direction: rho * g / ||g||.
Vec sam_perturb(const Vec& g, double rho);

// Radius back-solved from the loss budget: rho_raw = sigma_t / (||g|| + varrho),
// then clipped at rho_max. Returns the audit record (epsilon left empty).
PerturbState lesam_radius(double sigma_t, double grad_norm, double varrho, double rho_max);

// ASAM: eps = rho * T_w^2 g / ||T_w g||, T_w = diag(|w_i|).
Vec asam_perturb(const Vec& w, const Vec& g, double rho);

// GSAM descent combination: ghat - alpha * (g - proj_ghat(g)).
Vec gsam_combine(const Vec& g, const Vec& ghat, double alpha);

// SSAM: rescale the perturbed gradient back to the center-gradient norm.
Vec ssam_rescale(const Vec& g, const Vec& ghat);

// F-SAM: perturb along the residual g - ema (pre-update EMA), then advance
// the EMA. Falls back to sam_perturb when the residual is zero.
std::pair<Vec, Vec> fsam_perturb(const Vec& g, const Vec& ema, double rho, double decay);

// MSAM: perturb along the (optionally negated) momentum buffer.
Vec msam_perturb(const Vec& momentum_buf, double rho, bool negate);

// Eigen-SAM: mix the gradient direction with the dominant Hessian
// eigenvector, refreshed by power iteration every refresh_every steps.
// Returns (epsilon, refreshed eigenvector).
std::pair<Vec, Vec> eigensam_perturb(const Objective& obj, const Vec& w, const Batch& b,
                                     const Vec& g, double rho, double beta,
                                     const std::optional<Vec>& cached_eigvec,
                                     int refresh_every, long step_count);

}  // namespace lesam::optim
