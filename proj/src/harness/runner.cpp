#include "harness/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>

#include <nlohmann/json.hpp>

#include "curvature/spectrum.hpp"
#include "curvature/trace.hpp"
#include "numcore/error.hpp"
#include "numcore/rng.hpp"
#include "numcore/vec.hpp"
#include "optim/steps.hpp"
#include "testbed/blobs.hpp"
#include "testbed/csv.hpp"
#include "testbed/quadratic.hpp"

namespace lesam::harness {

namespace {

using numcore::Batch;
using numcore::CounterRng;
using numcore::Vec;

constexpr std::uint64_t kHeldoutStream = 0x8E1D0ull;
constexpr std::uint64_t kInitStream = 0x121B17ull;
constexpr std::uint64_t kShuffleStream = 0x5F0FFull;
constexpr std::uint64_t kSpectrumKey = 0xD1A60000ull;
constexpr std::uint64_t kTraceKey = 0x7EACE000ull;

long long now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

Vec broadcast(const std::vector<double>& v, int dim) {
  Vec out(dim);
  if (v.size() == 1) {
    out.setConstant(v[0]);
  } else {
    for (int i = 0; i < dim; ++i) out[i] = v[static_cast<size_t>(i)];
  }
  return out;
}

Vec analytic_init(const InitConfig& init, int dim, std::uint64_t seed) {
  switch (init.kind) {
    case InitKind::kZeros:
      return Vec::Zero(dim);
    case InitKind::kDefault:
    case InitKind::kConstant:
      return Vec::Constant(dim, init.value);
    case InitKind::kUniform: {
      CounterRng rng(seed, kInitStream);
      Vec out(dim);
      for (int i = 0; i < dim; ++i) out[i] = rng.next_uniform(init.low, init.high);
      return out;
    }
    case InitKind::kGauss: {
      CounterRng rng(seed, kInitStream);
      return init.scale * rng.gauss_vec(dim);
    }
  }
  return Vec::Zero(dim);
}

// Deterministic 80/20 split keyed on data_seed so every optimizer sees the
// same held-out rows regardless of its run seed.
void split_heldout(const Batch& full, std::uint64_t data_seed, Batch& train, Batch& heldout) {
  const int m = full.size();
  std::vector<int> order(static_cast<size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  CounterRng rng(data_seed, kHeldoutStream);
  rng.shuffle(order);
  const int held = m / 5;
  std::vector<int> held_idx(order.begin(), order.begin() + held);
  std::vector<int> train_idx(order.begin() + held, order.end());
  std::sort(held_idx.begin(), held_idx.end());
  std::sort(train_idx.begin(), train_idx.end());
  heldout = full.rows(held_idx);
  train = full.rows(train_idx);
}

testbed::Activation activation_from_string(const std::string& s) {
  return s == "relu" ? testbed::Activation::kRelu : testbed::Activation::kTanh;
}

std::string fmt_g(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

long long median_ns(std::vector<long long> xs) {
  std::sort(xs.begin(), xs.end());
  const size_t n = xs.size();
  if (n == 0) return 0;
  if (n % 2 == 1) return xs[n / 2];
  return (xs[n / 2 - 1] + xs[n / 2]) / 2;
}

nlohmann::json summary_to_json(const RunSummary& s) {
  nlohmann::json j;
  j["algo"] = s.algo;
  j["seed"] = s.seed;
  j["steps_total"] = s.steps_total;
  j["final_loss"] = s.final_loss;
  j["final_accuracy"] = s.final_accuracy ? nlohmann::json(*s.final_accuracy) : nlohmann::json();
  j["heldout_accuracy"] =
      s.heldout_accuracy ? nlohmann::json(*s.heldout_accuracy) : nlohmann::json();
  j["basin_id"] = s.basin_id ? nlohmann::json(*s.basin_id) : nlohmann::json();
  j["final_lambda_max"] =
      s.final_lambda_max ? nlohmann::json(*s.final_lambda_max) : nlohmann::json();
  j["final_trace"] = s.final_trace ? nlohmann::json(*s.final_trace) : nlohmann::json();
  j["grad_evals_total"] = s.grad_evals_total;
  j["loss_evals_total"] = s.loss_evals_total;
  j["total_wall_ns"] = s.total_wall_ns;
  return j;
}

}  // namespace

ProblemSetup build_problem(const ExperimentConfig& cfg) {
  const auto& p = cfg.problem;
  ProblemSetup out;
  switch (p.kind) {
    case ProblemKind::kQuadratic: {
      testbed::QuadraticSpec spec;
      spec.diag_a = broadcast(p.diag_a, p.dim);
      spec.center = broadcast(p.center, p.dim);
      out.objective = testbed::make_quadratic(std::move(spec));
      out.train = Batch::none();
      out.heldout = Batch::none();
      out.w0 = analytic_init(cfg.init, p.dim, cfg.run.seed);
      return out;
    }
    case ProblemKind::kTwoBasin: {
      testbed::TwoBasinSpec spec;
      spec.depth = p.depth;
      spec.m1 = broadcast(p.center1, p.dim);
      spec.m2 = broadcast(p.center2, p.dim);
      spec.s1 = p.width1;
      spec.s2 = p.width2;
      auto basin = testbed::make_two_basin(std::move(spec));
      out.basin = basin;
      out.objective = basin;
      out.train = Batch::none();
      out.heldout = Batch::none();
      out.w0 = analytic_init(cfg.init, p.dim, cfg.run.seed);
      return out;
    }
    case ProblemKind::kMlpBlobs:
    case ProblemKind::kMlpCsv: {
      Batch full;
      if (p.kind == ProblemKind::kMlpBlobs) {
        testbed::BlobsSpec bs;
        bs.num_classes = p.classes;
        bs.samples_per_class = p.samples_per_class;
        bs.feature_dim = p.feature_dim;
        bs.cluster_spread = p.cluster_spread;
        bs.seed = p.data_seed;
        full = testbed::make_blobs(bs);
      } else {
        full = testbed::load_csv(p.csv_path);
        if (full.feature_dim() != p.layer_dims.front()) {
          throw Error(Errc::validation_error, "csv feature dim " +
                                                  std::to_string(full.feature_dim()) +
                                                  " does not match problem.layer_dims front");
        }
        const int out_dim = p.layer_dims.back();
        for (int t : full.targets) {
          if (t >= out_dim) {
            throw Error(Errc::validation_error,
                        "csv label " + std::to_string(t) + " out of range for " +
                            std::to_string(out_dim) + " classes");
          }
        }
      }
      split_heldout(full, p.data_seed, out.train, out.heldout);
      testbed::MlpSpec spec;
      spec.layer_dims = p.layer_dims;
      spec.activation = activation_from_string(p.activation);
      spec.init_scale = p.init_scale;
      spec.seed = cfg.run.seed;
      auto mlp = testbed::make_mlp(spec, out.train);
      out.mlp = mlp;
      out.objective = mlp;
      out.w0 = testbed::mlp_init_params(spec);
      return out;
    }
  }
  throw Error(Errc::internal, "unhandled problem kind");
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const long long t_run0 = now_ns();

  ProblemSetup setup = build_problem(cfg);
  auto train_obj = std::make_shared<numcore::CountingObjective>(setup.objective);
  auto diag_obj = std::make_shared<numcore::CountingObjective>(setup.objective);

  const int epochs = cfg.run.epochs;
  const optim::OptimizerConfig ocfg = cfg.optimizer.build(std::max(1, epochs));
  optim::OptimizerConfig pre_switch_cfg = ocfg;
  pre_switch_cfg.algo = optim::Algo::kSgd;

  const bool dataset = is_dataset_problem(cfg.problem.kind);
  const int m = setup.train.size();
  const int batch_size =
      dataset ? ((cfg.run.batch_size == 0 || cfg.run.batch_size >= m) ? m : cfg.run.batch_size)
              : 0;

  optim::OptimizerState state = optim::make_state(ocfg.algo);
  Vec w = setup.w0;
  CounterRng shuffle_rng(cfg.run.seed, kShuffleStream);
  const auto& d = cfg.diagnostics;

  RunResult result;
  long step = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    const long long t_epoch0 = now_ns();
    const optim::OptimizerConfig& use =
        (cfg.run.switch_epoch && epoch < *cfg.run.switch_epoch) ? pre_switch_cfg : ocfg;

    std::vector<std::vector<int>> chunks;
    if (dataset) {
      std::vector<int> order(static_cast<size_t>(m));
      std::iota(order.begin(), order.end(), 0);
      shuffle_rng.shuffle(order);
      for (int at = 0; at < m; at += batch_size) {
        const int end = std::min(m, at + batch_size);
        chunks.emplace_back(order.begin() + at, order.begin() + end);
      }
    } else {
      chunks.resize(static_cast<size_t>(cfg.run.steps_per_epoch));
    }

    for (const auto& chunk : chunks) {
      const Batch b = dataset ? setup.train.rows(chunk) : Batch::none();
      const long long t0 = now_ns();
      optim::StepResult r = optim::step(*train_obj, w, b, use, std::move(state), epoch);
      const long long t1 = now_ns();

      const bool bad_loss = !std::isfinite(r.report.loss_center) ||
                            (r.report.loss_perturbed && !std::isfinite(*r.report.loss_perturbed));
      if (bad_loss || !numcore::all_finite(r.w)) {
        throw Error(Errc::divergence,
                    "non-finite loss or parameters at step " + std::to_string(step));
      }
      w = std::move(r.w);
      state = std::move(r.state);

      MetricsRow row;
      row.step = step;
      row.epoch = epoch;
      row.loss_center = r.report.loss_center;
      row.grad_norm = r.report.grad_norm;
      row.update_norm = r.report.update_norm;
      row.wall_ns = t1 - t0;
      if (r.report.loss_perturbed) row.loss_perturbed = *r.report.loss_perturbed;
      if (r.report.perturb && d.log_radius) {
        row.sigma_t = r.report.perturb->sigma_t;
        row.rho_raw = r.report.perturb->rho_raw;
        row.rho_clipped = r.report.perturb->rho_clipped;
        row.was_clipped = r.report.perturb->was_clipped;
      }
      result.rows.push_back(std::move(row));
      ++step;
    }
    result.epoch_wall_ns.push_back(now_ns() - t_epoch0);

    if (d.spectrum_every > 0 && (epoch + 1) % d.spectrum_every == 0) {
      curvature::SpectrumOptions so;
      so.k = d.spectrum_k;
      so.seed = numcore::mix_seed(cfg.run.seed, kSpectrumKey + static_cast<std::uint64_t>(epoch));
      auto spec = curvature::power_iteration_topk(*diag_obj, w, setup.train, so);
      result.rows.back().lambda_max = spec.eigenvalues.at(0);
    }
    if (d.trace_every > 0 && (epoch + 1) % d.trace_every == 0) {
      auto tr = curvature::hutchinson_trace(
          *diag_obj, w, setup.train, d.trace_probes,
          numcore::mix_seed(cfg.run.seed, kTraceKey + static_cast<std::uint64_t>(epoch)));
      result.rows.back().hessian_trace = tr.estimate;
    }
  }

  RunSummary& s = result.summary;
  s.algo = optim::algo_name(ocfg.algo);
  s.seed = cfg.run.seed;
  s.steps_total = step;
  s.final_loss = diag_obj->loss(w, setup.train);
  if (setup.mlp) {
    s.final_accuracy = setup.mlp->accuracy(w, setup.train);
    if (setup.heldout.size() > 0) s.heldout_accuracy = setup.mlp->accuracy(w, setup.heldout);
  }
  if (setup.basin) s.basin_id = setup.basin->basin_id(w);

  if (d.final_spectrum) {
    curvature::SpectrumOptions so;
    so.k = 1;
    so.seed = numcore::mix_seed(cfg.run.seed, kSpectrumKey + 0xFFFFull);
    s.final_lambda_max =
        curvature::power_iteration_topk(*diag_obj, w, setup.train, so).eigenvalues.at(0);
  }
  if (d.final_trace) {
    s.final_trace = curvature::hutchinson_trace(
                        *diag_obj, w, setup.train, d.trace_probes,
                        numcore::mix_seed(cfg.run.seed, kTraceKey + 0xFFFFull))
                        .estimate;
  }
  if (d.slice_at_end) {
    curvature::SliceOptions so;
    so.dims = d.slice_dims;
    so.grid = d.slice_grid;
    so.span = d.slice_span;
    so.seed = cfg.run.seed;
    result.slice = curvature::landscape_slice(*diag_obj, w, setup.train, so);
  }

  s.grad_evals_total = train_obj->grad_evals();
  s.loss_evals_total = train_obj->loss_evals();
  s.total_wall_ns = now_ns() - t_run0;
  result.final_w = std::move(w);
  return result;
}

std::string summary_json(const RunSummary& s) { return summary_to_json(s).dump(2); }

std::vector<SweepRun> run_sweep(const ExperimentConfig& base) {
  validate_config(base);
  if (base.sweep.param.empty()) {
    throw Error(Errc::validation_error, "run_sweep requires sweep.param");
  }
  std::vector<SweepRun> out;
  for (size_t i = 0; i < base.sweep.values.size(); ++i) {
    SweepRun entry;
    entry.value = base.sweep.values[i];
    ExperimentConfig c = base;
    c.sweep = SweepConfig{};
    c.run.seed = base.run.seed + i;
    entry.seed = c.run.seed;
    try {
      config_apply(c, base.sweep.param, entry.value);
      validate_config(c);
      RunResult r = run_experiment(c);
      entry.summary = std::move(r.summary);
      entry.rows = std::move(r.rows);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::string sweep_table(const std::string& param, const std::vector<SweepRun>& runs) {
  std::string out = param + "\tseed\tfinal_loss\tlambda_max\ttrace\theldout_acc\tstatus\n";
  for (const auto& r : runs) {
    out += r.value;
    out += '\t';
    out += std::to_string(r.seed);
    if (r.summary) {
      const auto& s = *r.summary;
      out += '\t' + fmt_g(s.final_loss);
      out += '\t' + (s.final_lambda_max ? fmt_g(*s.final_lambda_max) : std::string("-"));
      out += '\t' + (s.final_trace ? fmt_g(*s.final_trace) : std::string("-"));
      out += '\t' + (s.heldout_accuracy ? fmt_g(*s.heldout_accuracy) : std::string("-"));
      out += "\tok\n";
    } else {
      out += "\t-\t-\t-\t-\t";
      out += r.error;
      out += '\n';
    }
  }
  return out;
}

std::string sweep_json(const std::string& param, const std::vector<SweepRun>& runs) {
  nlohmann::json j;
  j["param"] = param;
  j["runs"] = nlohmann::json::array();
  for (const auto& r : runs) {
    nlohmann::json e;
    e["value"] = r.value;
    e["seed"] = r.seed;
    if (r.summary) {
      e["summary"] = summary_to_json(*r.summary);
    } else {
      e["error"] = r.error;
    }
    j["runs"].push_back(std::move(e));
  }
  return j.dump(2);
}

namespace {

// Shared by the spectrum/landscape probes: train, then rebuild the problem
// (deterministic per config) so the probe sees the bare objective.
std::pair<ProblemSetup, Vec> train_for_probe(const ExperimentConfig& cfg) {
  ExperimentConfig quiet = cfg;
  quiet.diagnostics.final_spectrum = false;
  quiet.diagnostics.final_trace = false;
  quiet.diagnostics.slice_at_end = false;
  RunResult r = run_experiment(quiet);
  return {build_problem(cfg), std::move(r.final_w)};
}

}  // namespace

curvature::SpectrumResult probe_spectrum(const ExperimentConfig& cfg, int k) {
  auto [setup, w] = train_for_probe(cfg);
  curvature::SpectrumOptions so;
  so.k = k;
  so.seed = numcore::mix_seed(cfg.run.seed, kSpectrumKey + 0xABCDull);
  return curvature::power_iteration_topk(*setup.objective, w, setup.train, so);
}

curvature::LandscapeSlice probe_landscape(const ExperimentConfig& cfg, int dims, int grid,
                                          double span) {
  auto [setup, w] = train_for_probe(cfg);
  curvature::SliceOptions so;
  so.dims = dims;
  so.grid = grid;
  so.span = span;
  so.seed = cfg.run.seed;
  return curvature::landscape_slice(*setup.objective, w, setup.train, so);
}

std::string spectrum_json(const curvature::SpectrumResult& r) {
  nlohmann::json j;
  j["eigenvalues"] = r.eigenvalues;
  j["residuals"] = r.residuals;
  j["converged"] = std::vector<bool>(r.converged.begin(), r.converged.end());
  j["iters_used"] = r.iters_used;
  return j.dump(2);
}

std::string slice_csv(const curvature::LandscapeSlice& s) {
  char buf[64];
  auto f17 = [&buf](double x) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  std::string out;
  if (s.dims == 1) {
    out = "alpha,loss\n";
    for (size_t i = 0; i < s.alphas.size(); ++i) {
      out += f17(s.alphas[i]) + ',' + f17(s.losses[i]) + '\n';
    }
  } else {
    out = "alpha,beta,loss\n";
    const size_t nb = s.betas.size();
    for (size_t i = 0; i < s.alphas.size(); ++i) {
      for (size_t jx = 0; jx < nb; ++jx) {
        out += f17(s.alphas[i]) + ',' + f17(s.betas[jx]) + ',' + f17(s.losses[i * nb + jx]) + '\n';
      }
    }
  }
  return out;
}

std::string time_compare_json(const TimeCompareResult& r) {
  nlohmann::json j;
  j["median_a_ns"] = r.median_a;
  j["median_b_ns"] = r.median_b;
  j["ratio"] = r.ratio;
  j["epoch_wall_a_ns"] = r.epoch_wall_a;
  j["epoch_wall_b_ns"] = r.epoch_wall_b;
  return j.dump(2);
}

TimeCompareResult time_compare(ExperimentConfig a, ExperimentConfig b, int epochs) {
  if (epochs < 1) throw Error(Errc::invalid_argument, "time_compare: epochs must be >= 1");
  auto prep = [epochs](ExperimentConfig c) {
    c.run.epochs = epochs;
    c.run.switch_epoch.reset();
    c.optimizer.anneal_start.reset();
    c.optimizer.anneal_len.reset();
    c.diagnostics = DiagnosticsConfig{};
    c.diagnostics.final_spectrum = false;
    c.diagnostics.final_trace = false;
    validate_config(c);
    return c;
  };
  TimeCompareResult out;
  out.epoch_wall_a = run_experiment(prep(std::move(a))).epoch_wall_ns;
  out.epoch_wall_b = run_experiment(prep(std::move(b))).epoch_wall_ns;
  out.median_a = median_ns(out.epoch_wall_a);
  out.median_b = median_ns(out.epoch_wall_b);
  out.ratio = out.median_b > 0 ? static_cast<double>(out.median_a) / static_cast<double>(out.median_b)
                               : 0.0;
  return out;
}

}  // namespace lesam::harness
