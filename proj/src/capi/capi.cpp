#include "lesam/lesam.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "harness/config.hpp"
#include "harness/metrics.hpp"
#include "harness/runner.hpp"
#include "numcore/error.hpp"

struct lesam_config {
  lesam::harness::ExperimentConfig cfg;
};

struct lesam_result {
  lesam::harness::RunResult run;
};

struct lesam_sweep_result {
  std::string param;
  std::vector<lesam::harness::SweepRun> runs;
};

namespace {

thread_local std::string g_last_error;

lesam_status status_from(lesam::Errc c) {
  using lesam::Errc;
  switch (c) {
    case Errc::zero_direction: return LESAM_ERR_ZERO_DIRECTION;
    case Errc::dim_mismatch: return LESAM_ERR_DIM_MISMATCH;
    case Errc::capability_missing: return LESAM_ERR_CAPABILITY_MISSING;
    case Errc::no_convergence: return LESAM_ERR_NO_CONVERGENCE;
    case Errc::parse_error: return LESAM_ERR_PARSE;
    case Errc::validation_error: return LESAM_ERR_VALIDATION;
    case Errc::divergence: return LESAM_ERR_DIVERGENCE;
    case Errc::io_error: return LESAM_ERR_IO;
    case Errc::invalid_argument: return LESAM_ERR_INVALID_ARGUMENT;
    case Errc::internal: return LESAM_ERR_INTERNAL;
  }
  return LESAM_ERR_INTERNAL;
}

template <typename Fn>
lesam_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return LESAM_OK;
  } catch (const lesam::Error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LESAM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LESAM_ERR_INTERNAL;
  }
}

lesam_status fail_invalid(const char* msg) {
  g_last_error = msg;
  return LESAM_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

lesam_status lesam_config_parse_file(const char* path, lesam_config** out) {
  if (path == nullptr || out == nullptr) return fail_invalid("null argument");
  return guarded([&] { *out = new lesam_config{lesam::harness::parse_config_file(path)}; });
}

lesam_status lesam_config_parse_text(const char* text, lesam_config** out) {
  if (text == nullptr || out == nullptr) return fail_invalid("null argument");
  return guarded([&] { *out = new lesam_config{lesam::harness::parse_config_text(text)}; });
}

lesam_status lesam_config_set(lesam_config* cfg, const char* key, const char* value) {
  if (cfg == nullptr || key == nullptr || value == nullptr) return fail_invalid("null argument");
  return guarded([&] {
    lesam::harness::ExperimentConfig next = cfg->cfg;
    lesam::harness::config_apply(next, key, value);
    lesam::harness::validate_config(next);
    cfg->cfg = std::move(next);
  });
}

lesam_status lesam_config_serialize(const lesam_config* cfg, char** out_text) {
  if (cfg == nullptr || out_text == nullptr) return fail_invalid("null argument");
  return guarded([&] { *out_text = copy_string(lesam::harness::serialize_config(cfg->cfg)); });
}

void lesam_config_free(lesam_config* cfg) { delete cfg; }

lesam_status lesam_run(const lesam_config* cfg, lesam_result** out) {
  if (cfg == nullptr || out == nullptr) return fail_invalid("null argument");
  return guarded([&] { *out = new lesam_result{lesam::harness::run_experiment(cfg->cfg)}; });
}

lesam_status lesam_result_summary_json(const lesam_result* res, char** out_json) {
  if (res == nullptr || out_json == nullptr) return fail_invalid("null argument");
  return guarded(
      [&] { *out_json = copy_string(lesam::harness::summary_json(res->run.summary)); });
}

lesam_status lesam_result_metrics_text(const lesam_result* res, int jsonl, char** out_text) {
  if (res == nullptr || out_text == nullptr) return fail_invalid("null argument");
  return guarded([&] {
    const auto fmt = jsonl ? lesam::harness::MetricsFormat::kJsonl
                           : lesam::harness::MetricsFormat::kCsv;
    *out_text = copy_string(lesam::harness::metrics_to_string(res->run.rows, fmt));
  });
}

lesam_status lesam_result_write_metrics(const lesam_result* res, const char* path, int jsonl) {
  if (res == nullptr || path == nullptr) return fail_invalid("null argument");
  return guarded([&] {
    const auto fmt = jsonl ? lesam::harness::MetricsFormat::kJsonl
                           : lesam::harness::MetricsFormat::kCsv;
    lesam::harness::write_metrics_file(res->run.rows, path, fmt);
  });
}

void lesam_result_free(lesam_result* res) { delete res; }

lesam_status lesam_sweep(const lesam_config* cfg, lesam_sweep_result** out) {
  if (cfg == nullptr || out == nullptr) return fail_invalid("null argument");
  return guarded([&] {
    auto runs = lesam::harness::run_sweep(cfg->cfg);
    *out = new lesam_sweep_result{cfg->cfg.sweep.param, std::move(runs)};
  });
}

int lesam_sweep_count(const lesam_sweep_result* res) {
  return res == nullptr ? 0 : static_cast<int>(res->runs.size());
}

lesam_status lesam_sweep_table(const lesam_sweep_result* res, char** out_text) {
  if (res == nullptr || out_text == nullptr) return fail_invalid("null argument");
  return guarded(
      [&] { *out_text = copy_string(lesam::harness::sweep_table(res->param, res->runs)); });
}

lesam_status lesam_sweep_json(const lesam_sweep_result* res, char** out_json) {
  if (res == nullptr || out_json == nullptr) return fail_invalid("null argument");
  return guarded(
      [&] { *out_json = copy_string(lesam::harness::sweep_json(res->param, res->runs)); });
}

void lesam_sweep_free(lesam_sweep_result* res) { delete res; }

lesam_status lesam_spectrum(const lesam_config* cfg, int k, char** out_json) {
  if (cfg == nullptr || out_json == nullptr) return fail_invalid("null argument");
  return guarded([&] {
    auto r = lesam::harness::probe_spectrum(cfg->cfg, k);
    *out_json = copy_string(lesam::harness::spectrum_json(r));
  });
}

lesam_status lesam_landscape(const lesam_config* cfg, int dims, int grid, double span,
                             char** out_csv) {
  if (cfg == nullptr || out_csv == nullptr) return fail_invalid("null argument");
  return guarded([&] {
    auto s = lesam::harness::probe_landscape(cfg->cfg, dims, grid, span);
    *out_csv = copy_string(lesam::harness::slice_csv(s));
  });
}

lesam_status lesam_time_compare(const lesam_config* a, const lesam_config* b, int epochs,
                                char** out_json) {
  if (a == nullptr || b == nullptr || out_json == nullptr) return fail_invalid("null argument");
  return guarded([&] {
    auto r = lesam::harness::time_compare(a->cfg, b->cfg, epochs);
    *out_json = copy_string(lesam::harness::time_compare_json(r));
  });
}

const char* lesam_last_error(void) { return g_last_error.c_str(); }

const char* lesam_status_name(lesam_status s) {
  switch (s) {
    case LESAM_OK: return "Ok";
    case LESAM_ERR_ZERO_DIRECTION: return "ZeroDirection";
    case LESAM_ERR_DIM_MISMATCH: return "DimMismatch";
    case LESAM_ERR_CAPABILITY_MISSING: return "CapabilityMissing";
    case LESAM_ERR_NO_CONVERGENCE: return "NoConvergence";
    case LESAM_ERR_PARSE: return "ParseError";
    case LESAM_ERR_VALIDATION: return "ValidationError";
    case LESAM_ERR_DIVERGENCE: return "DivergenceError";
    case LESAM_ERR_IO: return "IoError";
    case LESAM_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case LESAM_ERR_INTERNAL: return "InternalError";
  }
  return "InternalError";
}

void lesam_string_free(char* s) { std::free(s); }

}  // extern "C"
