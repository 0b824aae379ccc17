#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "optim/types.hpp"

namespace lesam::harness {

enum class ProblemKind { kQuadratic, kTwoBasin, kMlpBlobs, kMlpCsv };
enum class InitKind { kDefault, kZeros, kConstant, kUniform, kGauss };

bool is_dataset_problem(ProblemKind k);

struct ProblemConfig {
  ProblemKind kind = ProblemKind::kQuadratic;
  // quadratic / two_basin
  int dim = 1;
  std::vector<double> diag_a{1.0};    // broadcast when a single value is given
  std::vector<double> center{0.0};
  double depth = 1.0;
  std::vector<double> center1{-2.0};
  std::vector<double> center2{2.0};
  double width1 = 2.0;
  double width2 = 0.2;
  // mlp problems
  std::vector<int> layer_dims{2, 16, 16, 3};
  std::string activation = "tanh";
  double init_scale = 0.5;
  int classes = 3;
  int samples_per_class = 100;
  int feature_dim = 2;
  double cluster_spread = 0.15;
  std::uint64_t data_seed = 12345;
  std::string csv_path;
};

struct InitConfig {
  InitKind kind = InitKind::kDefault;
  double value = 1.0;   // constant
  double low = -1.0;    // uniform
  double high = 1.0;
  double scale = 1.0;   // gauss
};

struct OptimizerSection {
  optim::Algo kind = optim::Algo::kSgd;
  double lr = 0.05;
  double momentum = 0.0;
  double weight_decay = 0.0;
  double sigma0 = 0.35;
  double varrho = 1e-12;
  double rho_max = optim::kNoClip;
  std::optional<int> anneal_start;  // epoch at which the cosine window opens
  std::optional<int> anneal_len;    // length of the window; exclusive with anneal_start
  double rho = 0.05;
  double alpha = 0.5;  // lesam_plus
  double gsam_alpha = 0.4;
  double fsam_decay = 0.9;
  double eigensam_beta = 0.5;
  int eigensam_refresh = 100;
  bool msam_negate = false;
  double polyak_fstar = 0.0;

  // Resolve into the optimizer-module config for a run of `total_epochs`.
  optim::OptimizerConfig build(int total_epochs) const;
};

struct RunConfig {
  int epochs = 1;
  int steps_per_epoch = 1;  // analytic problems only
  int batch_size = 0;       // 0 = full batch
  std::uint64_t seed = 1;
  std::optional<int> switch_epoch;
};

struct DiagnosticsConfig {
  int spectrum_every = 0;
  int spectrum_k = 5;
  int trace_every = 0;
  int trace_probes = 100;
  bool slice_at_end = false;
  int slice_dims = 1;
  int slice_grid = 41;
  double slice_span = 1.0;
  bool final_spectrum = true;
  bool final_trace = true;
  bool log_radius = true;
};

struct SweepConfig {
  std::string param;
  std::vector<std::string> values;
};

struct ExperimentConfig {
  ProblemConfig problem;
  InitConfig init;
  OptimizerSection optimizer;
  RunConfig run;
  DiagnosticsConfig diagnostics;
  SweepConfig sweep;
};

// Flat key-value text, '#' comments, dotted section prefixes
// (e.g. optimizer.kind=lesam). Unknown keys are rejected.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Apply one key; used by the parser, sweeps, and CLI overrides.
void config_apply(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Constraint checks across sections; throws ValidationError.
void validate_config(const ExperimentConfig& cfg);

// Canonical text form; parse(serialize(cfg)) reproduces cfg byte-for-byte.
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace lesam::harness
