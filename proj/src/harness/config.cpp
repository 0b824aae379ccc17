#include "harness/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "numcore/error.hpp"

namespace lesam::harness {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& want) {
  throw Error(Errc::parse_error, "bad value '" + value + "' for key '" + key + "' (expected " + want + ")");
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "inf" || v == "none") return std::numeric_limits<double>::infinity();
  const char* s = v.c_str();
  char* end = nullptr;
  double x = std::strtod(s, &end);
  if (end == s || *end != '\0') bad_value(key, value, "a real number");
  return x;
}

double parse_finite(const std::string& key, const std::string& value) {
  double x = parse_double(key, value);
  if (!std::isfinite(x)) bad_value(key, value, "a finite real number");
  return x;
}

long parse_long(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  const char* s = v.c_str();
  char* end = nullptr;
  long x = std::strtol(s, &end, 10);
  if (end == s || *end != '\0') bad_value(key, value, "an integer");
  return x;
}

int parse_int(const std::string& key, const std::string& value) {
  return static_cast<int>(parse_long(key, value));
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  const char* s = v.c_str();
  char* end = nullptr;
  unsigned long long x = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0' || v[0] == '-') bad_value(key, value, "an unsigned integer");
  return static_cast<std::uint64_t>(x);
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "true") return true;
  if (v == "false") return false;
  bad_value(key, value, "true or false");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_finite(key, item));
  if (out.empty()) bad_value(key, value, "a comma-separated list of reals");
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int(key, item));
  if (out.empty()) bad_value(key, value, "a comma-separated list of integers");
  return out;
}

std::string fmt_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, p);
}

std::string fmt_double_list(const std::vector<double>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt_double(xs[i]);
  }
  return out;
}

std::string fmt_int_list(const std::vector<int>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

ProblemKind problem_kind_from_name(const std::string& key, const std::string& v) {
  if (v == "quadratic") return ProblemKind::kQuadratic;
  if (v == "two_basin") return ProblemKind::kTwoBasin;
  if (v == "mlp_blobs") return ProblemKind::kMlpBlobs;
  if (v == "mlp_csv") return ProblemKind::kMlpCsv;
  bad_value(key, v, "quadratic|two_basin|mlp_blobs|mlp_csv");
}

std::string problem_kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::kQuadratic: return "quadratic";
    case ProblemKind::kTwoBasin: return "two_basin";
    case ProblemKind::kMlpBlobs: return "mlp_blobs";
    case ProblemKind::kMlpCsv: return "mlp_csv";
  }
  return "quadratic";
}

InitKind init_kind_from_name(const std::string& key, const std::string& v) {
  if (v == "default") return InitKind::kDefault;
  if (v == "zeros") return InitKind::kZeros;
  if (v == "constant") return InitKind::kConstant;
  if (v == "uniform") return InitKind::kUniform;
  if (v == "gauss") return InitKind::kGauss;
  bad_value(key, v, "default|zeros|constant|uniform|gauss");
}

std::string init_kind_name(InitKind k) {
  switch (k) {
    case InitKind::kDefault: return "default";
    case InitKind::kZeros: return "zeros";
    case InitKind::kConstant: return "constant";
    case InitKind::kUniform: return "uniform";
    case InitKind::kGauss: return "gauss";
  }
  return "default";
}

}  // namespace

bool is_dataset_problem(ProblemKind k) {
  return k == ProblemKind::kMlpBlobs || k == ProblemKind::kMlpCsv;
}

optim::OptimizerConfig OptimizerSection::build(int total_epochs) const {
  if (anneal_start && anneal_len) {
    throw Error(Errc::validation_error,
                "optimizer.anneal_start and optimizer.anneal_len are mutually exclusive");
  }
  int n = 0;
  if (anneal_len) {
    n = *anneal_len;
  } else if (anneal_start) {
    if (*anneal_start < 0 || *anneal_start > total_epochs) {
      throw Error(Errc::validation_error, "optimizer.anneal_start must lie in [0, epochs]");
    }
    n = total_epochs - *anneal_start;
  }
  optim::OptimizerConfig cfg;
  cfg.algo = kind;
  cfg.base.lr = lr;
  cfg.base.momentum = momentum;
  cfg.base.weight_decay = weight_decay;
  cfg.base.sigma0 = sigma0;
  cfg.base.varrho = varrho;
  cfg.base.rho_max = rho_max;
  cfg.base.anneal_len_epochs = n;
  cfg.base.total_epochs = total_epochs;
  cfg.rho = rho;
  cfg.plus_alpha = alpha;
  cfg.gsam_alpha = gsam_alpha;
  cfg.fsam_decay = fsam_decay;
  cfg.eigensam_beta = eigensam_beta;
  cfg.eigensam_refresh_every = eigensam_refresh;
  cfg.msam_negate = msam_negate;
  cfg.polyak_fstar = polyak_fstar;
  cfg.validate();
  return cfg;
}

void config_apply(ExperimentConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key.empty()) throw Error(Errc::parse_error, "empty config key");

  auto& p = cfg.problem;
  auto& in = cfg.init;
  auto& o = cfg.optimizer;
  auto& r = cfg.run;
  auto& d = cfg.diagnostics;

  if (key == "problem.kind") p.kind = problem_kind_from_name(key, value);
  else if (key == "problem.dim") p.dim = parse_int(key, value);
  else if (key == "problem.diag_a") p.diag_a = parse_double_list(key, value);
  else if (key == "problem.center") p.center = parse_double_list(key, value);
  else if (key == "problem.depth") p.depth = parse_finite(key, value);
  else if (key == "problem.center1") p.center1 = parse_double_list(key, value);
  else if (key == "problem.center2") p.center2 = parse_double_list(key, value);
  else if (key == "problem.width1") p.width1 = parse_finite(key, value);
  else if (key == "problem.width2") p.width2 = parse_finite(key, value);
  else if (key == "problem.layer_dims") p.layer_dims = parse_int_list(key, value);
  else if (key == "problem.activation") p.activation = value;
  else if (key == "problem.init_scale") p.init_scale = parse_finite(key, value);
  else if (key == "problem.classes") p.classes = parse_int(key, value);
  else if (key == "problem.samples_per_class") p.samples_per_class = parse_int(key, value);
  else if (key == "problem.feature_dim") p.feature_dim = parse_int(key, value);
  else if (key == "problem.cluster_spread") p.cluster_spread = parse_finite(key, value);
  else if (key == "problem.data_seed") p.data_seed = parse_u64(key, value);
  else if (key == "problem.csv_path") p.csv_path = value;
  else if (key == "init.kind") in.kind = init_kind_from_name(key, value);
  else if (key == "init.value") in.value = parse_finite(key, value);
  else if (key == "init.low") in.low = parse_finite(key, value);
  else if (key == "init.high") in.high = parse_finite(key, value);
  else if (key == "init.scale") in.scale = parse_finite(key, value);
  else if (key == "optimizer.kind") {
    auto algo = optim::algo_from_name(value);
    if (!algo) bad_value(key, value, "an optimizer name");
    o.kind = *algo;
  }
  else if (key == "optimizer.lr") o.lr = parse_finite(key, value);
  else if (key == "optimizer.momentum") o.momentum = parse_finite(key, value);
  else if (key == "optimizer.weight_decay") o.weight_decay = parse_finite(key, value);
  else if (key == "optimizer.sigma0") o.sigma0 = parse_finite(key, value);
  else if (key == "optimizer.varrho") o.varrho = parse_finite(key, value);
  else if (key == "optimizer.rho_max") o.rho_max = parse_double(key, value);
  else if (key == "optimizer.anneal_start") o.anneal_start = parse_int(key, value);
  else if (key == "optimizer.anneal_len") o.anneal_len = parse_int(key, value);
  else if (key == "optimizer.rho") o.rho = parse_finite(key, value);
  else if (key == "optimizer.alpha") o.alpha = parse_finite(key, value);
  else if (key == "optimizer.gsam_alpha") o.gsam_alpha = parse_finite(key, value);
  else if (key == "optimizer.fsam_decay") o.fsam_decay = parse_finite(key, value);
  else if (key == "optimizer.eigensam_beta") o.eigensam_beta = parse_finite(key, value);
  else if (key == "optimizer.eigensam_refresh") o.eigensam_refresh = parse_int(key, value);
  else if (key == "optimizer.msam_negate") o.msam_negate = parse_bool(key, value);
  else if (key == "optimizer.polyak_fstar") o.polyak_fstar = parse_finite(key, value);
  else if (key == "run.epochs") r.epochs = parse_int(key, value);
  else if (key == "run.steps_per_epoch") r.steps_per_epoch = parse_int(key, value);
  else if (key == "run.batch_size") r.batch_size = parse_int(key, value);
  else if (key == "run.seed") r.seed = parse_u64(key, value);
  else if (key == "run.switch_epoch") r.switch_epoch = parse_int(key, value);
  else if (key == "diagnostics.spectrum_every") d.spectrum_every = parse_int(key, value);
  else if (key == "diagnostics.spectrum_k") d.spectrum_k = parse_int(key, value);
  else if (key == "diagnostics.trace_every") d.trace_every = parse_int(key, value);
  else if (key == "diagnostics.trace_probes") d.trace_probes = parse_int(key, value);
  else if (key == "diagnostics.slice_at_end") d.slice_at_end = parse_bool(key, value);
  else if (key == "diagnostics.slice_dims") d.slice_dims = parse_int(key, value);
  else if (key == "diagnostics.slice_grid") d.slice_grid = parse_int(key, value);
  else if (key == "diagnostics.slice_span") d.slice_span = parse_finite(key, value);
  else if (key == "diagnostics.final_spectrum") d.final_spectrum = parse_bool(key, value);
  else if (key == "diagnostics.final_trace") d.final_trace = parse_bool(key, value);
  else if (key == "diagnostics.log_radius") d.log_radius = parse_bool(key, value);
  else if (key == "sweep.param") cfg.sweep.param = value;
  else if (key == "sweep.values") {
    cfg.sweep.values.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.sweep.values.push_back(trim(item));
    if (cfg.sweep.values.empty()) bad_value(key, value, "a comma-separated list");
  } else {
    throw Error(Errc::parse_error, "unknown config key '" + key + "'");
  }
}

void validate_config(const ExperimentConfig& cfg) {
  const auto& p = cfg.problem;
  auto fail = [](const std::string& msg) { throw Error(Errc::validation_error, msg); };

  auto check_vec = [&](const std::vector<double>& v, int dim, const std::string& name) {
    if (v.size() != 1 && static_cast<int>(v.size()) != dim) {
      fail(name + " must have 1 or problem.dim entries");
    }
  };

  switch (p.kind) {
    case ProblemKind::kQuadratic: {
      if (p.dim < 1) fail("problem.dim must be >= 1");
      check_vec(p.diag_a, p.dim, "problem.diag_a");
      check_vec(p.center, p.dim, "problem.center");
      for (double a : p.diag_a)
        if (!(a > 0)) fail("problem.diag_a entries must be > 0");
      break;
    }
    case ProblemKind::kTwoBasin: {
      if (p.dim < 1) fail("problem.dim must be >= 1");
      check_vec(p.center1, p.dim, "problem.center1");
      check_vec(p.center2, p.dim, "problem.center2");
      if (!(p.depth > 0)) fail("problem.depth must be > 0");
      if (!(p.width1 > p.width2) || !(p.width2 > 0)) fail("two-basin widths require width1 > width2 > 0");
      break;
    }
    case ProblemKind::kMlpBlobs: {
      if (p.layer_dims.size() < 2) fail("problem.layer_dims needs at least input and output dims");
      for (int x : p.layer_dims)
        if (x < 1) fail("problem.layer_dims entries must be >= 1");
      if (p.activation != "tanh" && p.activation != "relu") fail("problem.activation must be tanh or relu");
      if (p.init_scale < 0) fail("problem.init_scale must be >= 0");
      if (p.classes < 2) fail("problem.classes must be >= 2");
      if (p.samples_per_class < 1) fail("problem.samples_per_class must be >= 1");
      if (p.feature_dim < 1) fail("problem.feature_dim must be >= 1");
      if (!(p.cluster_spread >= 0)) fail("problem.cluster_spread must be >= 0");
      if (p.layer_dims.front() != p.feature_dim) fail("problem.layer_dims front must equal problem.feature_dim");
      if (p.layer_dims.back() != p.classes) fail("problem.layer_dims back must equal problem.classes");
      break;
    }
    case ProblemKind::kMlpCsv: {
      if (p.layer_dims.size() < 2) fail("problem.layer_dims needs at least input and output dims");
      for (int x : p.layer_dims)
        if (x < 1) fail("problem.layer_dims entries must be >= 1");
      if (p.activation != "tanh" && p.activation != "relu") fail("problem.activation must be tanh or relu");
      if (p.init_scale < 0) fail("problem.init_scale must be >= 0");
      if (p.csv_path.empty()) fail("problem.csv_path is required for mlp_csv");
      break;
    }
  }

  const bool dataset = is_dataset_problem(p.kind);
  if (dataset && cfg.init.kind != InitKind::kDefault) {
    fail("init.kind must be default for mlp problems (network init owns the parameters)");
  }
  if (cfg.init.kind == InitKind::kUniform && !(cfg.init.low < cfg.init.high)) {
    fail("init.low must be < init.high");
  }
  if (cfg.init.kind == InitKind::kGauss && !(cfg.init.scale >= 0)) {
    fail("init.scale must be >= 0");
  }

  const auto& r = cfg.run;
  if (r.epochs < 0) fail("run.epochs must be >= 0");
  if (r.steps_per_epoch < 1) fail("run.steps_per_epoch must be >= 1");
  if (!dataset && r.batch_size != 0) fail("run.batch_size applies only to dataset problems");
  if (dataset && r.steps_per_epoch != 1) fail("run.steps_per_epoch applies only to analytic problems");
  if (r.batch_size < 0) fail("run.batch_size must be >= 0");
  if (r.switch_epoch && (*r.switch_epoch < 0 || *r.switch_epoch > r.epochs)) {
    fail("run.switch_epoch must lie in [0, run.epochs]");
  }

  const auto& d = cfg.diagnostics;
  if (d.spectrum_every < 0 || d.trace_every < 0) fail("diagnostic cadences must be >= 0");
  if (d.spectrum_k < 1) fail("diagnostics.spectrum_k must be >= 1");
  if (d.trace_probes < 1) fail("diagnostics.trace_probes must be >= 1");
  if (d.slice_dims != 1 && d.slice_dims != 2) fail("diagnostics.slice_dims must be 1 or 2");
  if (d.slice_grid < 3 || d.slice_grid % 2 == 0) fail("diagnostics.slice_grid must be odd and >= 3");
  if (!(d.slice_span > 0)) fail("diagnostics.slice_span must be > 0");

  // Resolves anneal keys and runs the optimizer-module checks.
  cfg.optimizer.build(std::max(1, r.epochs));

  if (!cfg.sweep.param.empty()) {
    if (cfg.sweep.values.empty()) fail("sweep.values must be non-empty when sweep.param is set");
    ExperimentConfig probe = cfg;
    probe.sweep = SweepConfig{};
    for (const auto& v : cfg.sweep.values) {
      config_apply(probe, cfg.sweep.param, v);  // unknown key or bad value surfaces here
    }
  } else if (!cfg.sweep.values.empty()) {
    fail("sweep.values requires sweep.param");
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      config_apply(cfg, line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error& e) {
      if (e.code() == Errc::parse_error) {
        throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": " + e.what());
      }
      throw;
    }
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  const auto& p = cfg.problem;
  const auto& o = cfg.optimizer;
  const auto& r = cfg.run;
  const auto& d = cfg.diagnostics;
  std::string out;
  auto kv = [&out](const std::string& k, const std::string& v) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  };

  kv("problem.kind", problem_kind_name(p.kind));
  switch (p.kind) {
    case ProblemKind::kQuadratic:
      kv("problem.dim", std::to_string(p.dim));
      kv("problem.diag_a", fmt_double_list(p.diag_a));
      kv("problem.center", fmt_double_list(p.center));
      break;
    case ProblemKind::kTwoBasin:
      kv("problem.dim", std::to_string(p.dim));
      kv("problem.depth", fmt_double(p.depth));
      kv("problem.center1", fmt_double_list(p.center1));
      kv("problem.center2", fmt_double_list(p.center2));
      kv("problem.width1", fmt_double(p.width1));
      kv("problem.width2", fmt_double(p.width2));
      break;
    case ProblemKind::kMlpBlobs:
      kv("problem.layer_dims", fmt_int_list(p.layer_dims));
      kv("problem.activation", p.activation);
      kv("problem.init_scale", fmt_double(p.init_scale));
      kv("problem.classes", std::to_string(p.classes));
      kv("problem.samples_per_class", std::to_string(p.samples_per_class));
      kv("problem.feature_dim", std::to_string(p.feature_dim));
      kv("problem.cluster_spread", fmt_double(p.cluster_spread));
      kv("problem.data_seed", std::to_string(p.data_seed));
      break;
    case ProblemKind::kMlpCsv:
      kv("problem.layer_dims", fmt_int_list(p.layer_dims));
      kv("problem.activation", p.activation);
      kv("problem.init_scale", fmt_double(p.init_scale));
      kv("problem.data_seed", std::to_string(p.data_seed));
      kv("problem.csv_path", p.csv_path);
      break;
  }

  if (!is_dataset_problem(p.kind)) {
    kv("init.kind", init_kind_name(cfg.init.kind));
    switch (cfg.init.kind) {
      case InitKind::kConstant: kv("init.value", fmt_double(cfg.init.value)); break;
      case InitKind::kUniform:
        kv("init.low", fmt_double(cfg.init.low));
        kv("init.high", fmt_double(cfg.init.high));
        break;
      case InitKind::kGauss: kv("init.scale", fmt_double(cfg.init.scale)); break;
      default: break;
    }
  }

  kv("optimizer.kind", optim::algo_name(o.kind));
  kv("optimizer.lr", fmt_double(o.lr));
  kv("optimizer.momentum", fmt_double(o.momentum));
  kv("optimizer.weight_decay", fmt_double(o.weight_decay));
  const bool budget = optim::uses_loss_budget(o.kind);
  const bool two_pass = optim::is_two_pass(o.kind);
  if (budget) {
    kv("optimizer.sigma0", fmt_double(o.sigma0));
    kv("optimizer.varrho", fmt_double(o.varrho));
    kv("optimizer.rho_max", fmt_double(o.rho_max));
    if (o.anneal_start) kv("optimizer.anneal_start", std::to_string(*o.anneal_start));
    if (o.anneal_len) kv("optimizer.anneal_len", std::to_string(*o.anneal_len));
  } else if (two_pass) {
    kv("optimizer.rho", fmt_double(o.rho));
  }
  switch (o.kind) {
    case optim::Algo::kLeSamPlus: kv("optimizer.alpha", fmt_double(o.alpha)); break;
    case optim::Algo::kGsam: kv("optimizer.gsam_alpha", fmt_double(o.gsam_alpha)); break;
    case optim::Algo::kFsam: kv("optimizer.fsam_decay", fmt_double(o.fsam_decay)); break;
    case optim::Algo::kEigenSam:
      kv("optimizer.eigensam_beta", fmt_double(o.eigensam_beta));
      kv("optimizer.eigensam_refresh", std::to_string(o.eigensam_refresh));
      break;
    case optim::Algo::kMsam: kv("optimizer.msam_negate", o.msam_negate ? "true" : "false"); break;
    case optim::Algo::kPolyak: kv("optimizer.polyak_fstar", fmt_double(o.polyak_fstar)); break;
    default: break;
  }

  kv("run.epochs", std::to_string(r.epochs));
  if (is_dataset_problem(p.kind)) {
    kv("run.batch_size", std::to_string(r.batch_size));
  } else {
    kv("run.steps_per_epoch", std::to_string(r.steps_per_epoch));
  }
  kv("run.seed", std::to_string(r.seed));
  if (r.switch_epoch) kv("run.switch_epoch", std::to_string(*r.switch_epoch));

  kv("diagnostics.spectrum_every", std::to_string(d.spectrum_every));
  kv("diagnostics.spectrum_k", std::to_string(d.spectrum_k));
  kv("diagnostics.trace_every", std::to_string(d.trace_every));
  kv("diagnostics.trace_probes", std::to_string(d.trace_probes));
  kv("diagnostics.slice_at_end", d.slice_at_end ? "true" : "false");
  kv("diagnostics.slice_dims", std::to_string(d.slice_dims));
  kv("diagnostics.slice_grid", std::to_string(d.slice_grid));
  kv("diagnostics.slice_span", fmt_double(d.slice_span));
  kv("diagnostics.final_spectrum", d.final_spectrum ? "true" : "false");
  kv("diagnostics.final_trace", d.final_trace ? "true" : "false");
  kv("diagnostics.log_radius", d.log_radius ? "true" : "false");

  if (!cfg.sweep.param.empty()) {
    kv("sweep.param", cfg.sweep.param);
    std::string vals;
    for (size_t i = 0; i < cfg.sweep.values.size(); ++i) {
      if (i) vals += ',';
      vals += cfg.sweep.values[i];
    }
    kv("sweep.values", vals);
  }
  return out;
}

}  // namespace lesam::harness
