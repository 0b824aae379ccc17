#pragma once

#include <limits>
#include <optional>
#include <string>

#include "numcore/objective.hpp"

namespace lesam::optim {

using numcore::Batch;
using numcore::Objective;
using numcore::Vec;

constexpr double kNoClip = std::numeric_limits<double>::infinity();

enum class Algo {
  kSgd,
  kPolyak,
  kSam,
  kLeSam,
  kLeSamPlus,
  kAsam,
  kGsam,
  kSsam,
  kFsam,
  kMsam,
  kEigenSam,
};

const char* algo_name(Algo a);
std::optional<Algo> algo_from_name(const std::string& name);
bool is_two_pass(Algo a);      // evaluates a perturbed gradient each step
bool uses_loss_budget(Algo a); // sigma-driven radius (LE-SAM family)

// Loss-budget machinery plus the base-optimizer settings shared by every
// algorithm in this module.
struct LeSamConfig {
  double sigma0 = 0.35;
  double varrho = 1e-12;
  double rho_max = kNoClip;
  int anneal_len_epochs = 0;  // 0 disables annealing
  int total_epochs = 1;
  double lr = 0.05;
  double momentum = 0.0;
  double weight_decay = 0.0;

  void validate() const;
};

struct OptimizerConfig {
  Algo algo = Algo::kSgd;
  LeSamConfig base;

  double rho = 0.05;  // fixed radius for the SAM-style family
  double plus_alpha = 0.5;
  double gsam_alpha = 0.4;
  double fsam_decay = 0.9;
  double eigensam_beta = 0.5;
  int eigensam_refresh_every = 100;
  bool msam_negate = false;
  double polyak_fstar = 0.0;

  void validate() const;
};

// Audit record of one radius computation.
struct PerturbState {
  std::optional<double> sigma_t;  // set for loss-budget algorithms
  double grad_norm = 0.0;
  double rho_raw = 0.0;
  double rho_clipped = 0.0;
  bool was_clipped = false;
  Vec epsilon;
};

struct OptimizerState {
  Algo algorithm = Algo::kSgd;
  std::optional<Vec> momentum_buf;
  std::optional<Vec> ema_grad;      // F-SAM
  std::optional<Vec> cached_eigvec; // Eigen-SAM
  long step_count = 0;
};

inline OptimizerState make_state(Algo a) {
  OptimizerState s;
  s.algorithm = a;
  return s;
}

struct StepReport {
  double loss_center = 0.0;
  std::optional<double> loss_perturbed;
  std::optional<PerturbState> perturb;
  double grad_norm = 0.0;  // norm of the center gradient
  double update_norm = 0.0;
};

struct StepResult {
  Vec w;
  OptimizerState state;
  StepReport report;
};

}  // namespace lesam::optim
