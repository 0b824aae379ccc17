// Command-line front end; talks to the library through the C API only.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "lesam/lesam.h"

namespace {

// RAII wrappers around the C handles.
struct ConfigHandle {
  lesam_config* ptr = nullptr;
  ~ConfigHandle() { lesam_config_free(ptr); }
};
struct ResultHandle {
  lesam_result* ptr = nullptr;
  ~ResultHandle() { lesam_result_free(ptr); }
};
struct SweepHandle {
  lesam_sweep_result* ptr = nullptr;
  ~SweepHandle() { lesam_sweep_free(ptr); }
};
struct StringHandle {
  char* ptr = nullptr;
  ~StringHandle() { lesam_string_free(ptr); }
};

[[noreturn]] void die_status(lesam_status s) {
  std::cerr << "error (" << lesam_status_name(s) << "): " << lesam_last_error() << "\n";
  std::exit(static_cast<int>(s));
}

void check(lesam_status s) {
  if (s != LESAM_OK) die_status(s);
}

// Options shared by every subcommand.
struct Common {
  std::vector<std::string> sets;
  std::string seed;
  std::string out;

  void attach(CLI::App* cmd) {
    cmd->add_option("--set", sets, "override a config key (key=value, repeatable)")
        ->allow_extra_args(false)
        ->check([](const std::string& kv) {
          return kv.find('=') == std::string::npos ? "--set expects key=value" : "";
        });
    cmd->add_option("--seed", seed, "shorthand for --set run.seed=N (applied last)");
    cmd->add_option("--out", out, "write the command's payload to PATH");
  }
};

// Overrides are appended to the file text and the merged config is parsed
// once: the parser keeps the last assignment to a key, and validation sees
// only the final state, so co-dependent keys (sweep.param / sweep.values,
// run.switch_epoch / run.epochs) can be overridden together.
ConfigHandle load_config(const std::string& path, const Common& c) {
  ConfigHandle cfg;
  if (c.sets.empty() && c.seed.empty()) {
    check(lesam_config_parse_file(path.c_str(), &cfg.ptr));
    return cfg;
  }
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error (IoError): cannot read '" << path << "'\n";
    std::exit(static_cast<int>(LESAM_ERR_IO));
  }
  std::ostringstream text;
  text << in.rdbuf();
  for (const std::string& kv : c.sets) {
    const size_t eq = kv.find('=');
    text << '\n' << kv.substr(0, eq) << " = " << kv.substr(eq + 1) << '\n';
  }
  if (!c.seed.empty()) text << "\nrun.seed = " << c.seed << '\n';
  check(lesam_config_parse_text(text.str().c_str(), &cfg.ptr));
  return cfg;
}

void write_file(const std::string& path, const char* text) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error (IoError): cannot open '" << path << "' for writing\n";
    std::exit(static_cast<int>(LESAM_ERR_IO));
  }
  out << text;
}

void emit(const Common& c, const char* text, bool trailing_newline = false) {
  if (c.out.empty()) {
    std::cout << text;
    if (trailing_newline) std::cout << "\n";
  } else {
    write_file(c.out, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sharpness-aware optimization laboratory"};
  app.require_subcommand(1);

  Common common;
  std::string cfg_path, cfg_path_b;
  std::string format = "csv";
  bool as_json = false;
  int k = 5, dims = 1, grid = 41, epochs = 5;
  double span = 1.0;

  CLI::App* run = app.add_subcommand("run", "train once, print a summary as JSON");
  run->add_option("config", cfg_path, "experiment config file")->required();
  run->add_option("--format", format, "metrics format for --out (default csv)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  common.attach(run);

  CLI::App* sweep =
      app.add_subcommand("sweep", "run the sweep described by sweep.param / sweep.values");
  sweep->add_option("config", cfg_path, "experiment config file")->required();
  sweep->add_flag("--json", as_json, "print JSON instead of the text table");
  common.attach(sweep);

  CLI::App* spectrum =
      app.add_subcommand("spectrum", "top-k Hessian eigenvalues at the trained point");
  spectrum->add_option("config", cfg_path, "experiment config file")->required();
  spectrum->add_option("--k", k, "eigenpair count (default 5)");
  common.attach(spectrum);

  CLI::App* landscape =
      app.add_subcommand("landscape", "loss-surface slice at the trained point (CSV)");
  landscape->add_option("config", cfg_path, "experiment config file")->required();
  landscape->add_option("--dims", dims, "slice dimensionality, 1 or 2 (default 1)");
  landscape->add_option("--grid", grid, "odd grid points per axis (default 41)");
  landscape->add_option("--span", span, "half-width of the slice (default 1.0)");
  common.attach(landscape);

  CLI::App* timecmp =
      app.add_subcommand("timecmp", "median per-epoch wall-time comparison");
  timecmp->add_option("configA", cfg_path, "first experiment config")->required();
  timecmp->add_option("configB", cfg_path_b, "second experiment config")->required();
  timecmp->add_option("--epochs", epochs, "epochs per arm (default 5)");
  common.attach(timecmp);

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    ConfigHandle cfg = load_config(cfg_path, common);
    ResultHandle res;
    check(lesam_run(cfg.ptr, &res.ptr));
    StringHandle summary;
    check(lesam_result_summary_json(res.ptr, &summary.ptr));
    std::cout << summary.ptr << "\n";
    if (!common.out.empty()) {
      check(lesam_result_write_metrics(res.ptr, common.out.c_str(),
                                       format == "jsonl" ? 1 : 0));
    }
  } else if (*sweep) {
    ConfigHandle cfg = load_config(cfg_path, common);
    SweepHandle res;
    check(lesam_sweep(cfg.ptr, &res.ptr));
    StringHandle text;
    if (as_json) {
      check(lesam_sweep_json(res.ptr, &text.ptr));
    } else {
      check(lesam_sweep_table(res.ptr, &text.ptr));
    }
    emit(common, text.ptr);
    if (!common.out.empty()) std::cout << "wrote " << common.out << "\n";
  } else if (*spectrum) {
    ConfigHandle cfg = load_config(cfg_path, common);
    StringHandle text;
    check(lesam_spectrum(cfg.ptr, k, &text.ptr));
    emit(common, text.ptr, true);
  } else if (*landscape) {
    ConfigHandle cfg = load_config(cfg_path, common);
    StringHandle text;
    check(lesam_landscape(cfg.ptr, dims, grid, span, &text.ptr));
    emit(common, text.ptr);
  } else if (*timecmp) {
    ConfigHandle a = load_config(cfg_path, common);
    ConfigHandle b = load_config(cfg_path_b, common);
    StringHandle text;
    check(lesam_time_compare(a.ptr, b.ptr, epochs, &text.ptr));
    emit(common, text.ptr, true);
  }
  return 0;
}
