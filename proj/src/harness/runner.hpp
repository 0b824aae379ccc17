#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "curvature/slice.hpp"
#include "curvature/spectrum.hpp"
#include "harness/config.hpp"
#include "harness/metrics.hpp"
#include "numcore/objective.hpp"
#include "testbed/mlp.hpp"
#include "testbed/two_basin.hpp"

namespace lesam::harness {

struct ProblemSetup {
  std::shared_ptr<const numcore::Objective> objective;
  numcore::Batch train;    // empty for analytic problems
  numcore::Batch heldout;  // 20% split for mlp problems
  numcore::Vec w0;
  std::shared_ptr<const testbed::MlpObjective> mlp;         // set for mlp kinds
  std::shared_ptr<const testbed::TwoBasinObjective> basin;  // set for two_basin
};

ProblemSetup build_problem(const ExperimentConfig& cfg);

struct RunSummary {
  std::string algo;
  std::uint64_t seed = 0;
  long steps_total = 0;
  double final_loss = 0.0;
  std::optional<double> final_accuracy;
  std::optional<double> heldout_accuracy;
  std::optional<int> basin_id;
  std::optional<double> final_lambda_max;
  std::optional<double> final_trace;
  long grad_evals_total = 0;
  long loss_evals_total = 0;
  long long total_wall_ns = 0;
};

struct RunResult {
  RunSummary summary;
  std::vector<MetricsRow> rows;
  std::vector<long long> epoch_wall_ns;
  std::optional<curvature::LandscapeSlice> slice;
  numcore::Vec final_w;
};

// Executes the configured run; throws DivergenceError on a non-finite loss.
RunResult run_experiment(const ExperimentConfig& cfg);

std::string summary_json(const RunSummary& s);

struct SweepRun {
  std::string value;
  std::uint64_t seed = 0;
  std::string error;  // non-empty when the run failed; summary/rows absent then
  std::optional<RunSummary> summary;
  std::vector<MetricsRow> rows;
};

// One run per sweep value; value i runs with seed base_seed + i.
// Per-run failures are recorded, not propagated.
std::vector<SweepRun> run_sweep(const ExperimentConfig& base);

std::string sweep_table(const std::string& param, const std::vector<SweepRun>& runs);
std::string sweep_json(const std::string& param, const std::vector<SweepRun>& runs);

struct TimeCompareResult {
  std::vector<long long> epoch_wall_a;
  std::vector<long long> epoch_wall_b;
  long long median_a = 0;
  long long median_b = 0;
  double ratio = 0.0;  // median_a / median_b
};

// Medians of per-epoch wall time with diagnostics disabled on both arms.
TimeCompareResult time_compare(ExperimentConfig a, ExperimentConfig b, int epochs = 5);
std::string time_compare_json(const TimeCompareResult& r);

// Train per the config (run.epochs = 0 probes the initial point), then
// measure curvature at the final parameters on the full training data.
curvature::SpectrumResult probe_spectrum(const ExperimentConfig& cfg, int k);
curvature::LandscapeSlice probe_landscape(const ExperimentConfig& cfg, int dims, int grid,
                                          double span);

std::string spectrum_json(const curvature::SpectrumResult& r);
std::string slice_csv(const curvature::LandscapeSlice& s);

}  // namespace lesam::harness
