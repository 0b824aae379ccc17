#include "harness/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "numcore/error.hpp"

namespace lesam::harness {

const char* const kMetricsHeader =
    "step,epoch,loss_center,loss_perturbed,grad_norm,sigma_t,rho_raw,rho_clipped,"
    "was_clipped,update_norm,lambda_max,hessian_trace,wall_ns";

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string csv_opt(const std::optional<double>& x) { return x ? fmt17(*x) : std::string(); }

std::string json_opt(const std::optional<double>& x) { return x ? fmt17(*x) : std::string("null"); }

void write_csv(const std::vector<MetricsRow>& rows, std::ostream& os) {
  os << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    os << r.step << ',' << r.epoch << ',' << fmt17(r.loss_center) << ','
       << csv_opt(r.loss_perturbed) << ',' << fmt17(r.grad_norm) << ',' << csv_opt(r.sigma_t)
       << ',' << csv_opt(r.rho_raw) << ',' << csv_opt(r.rho_clipped) << ','
       << (r.was_clipped ? (*r.was_clipped ? "true" : "false") : "") << ','
       << fmt17(r.update_norm) << ',' << csv_opt(r.lambda_max) << ','
       << csv_opt(r.hessian_trace) << ',' << r.wall_ns << '\n';
  }
}

void write_jsonl(const std::vector<MetricsRow>& rows, std::ostream& os) {
  for (const auto& r : rows) {
    os << "{\"step\":" << r.step << ",\"epoch\":" << r.epoch << ",\"loss_center\":"
       << fmt17(r.loss_center) << ",\"loss_perturbed\":" << json_opt(r.loss_perturbed)
       << ",\"grad_norm\":" << fmt17(r.grad_norm) << ",\"sigma_t\":" << json_opt(r.sigma_t)
       << ",\"rho_raw\":" << json_opt(r.rho_raw) << ",\"rho_clipped\":" << json_opt(r.rho_clipped)
       << ",\"was_clipped\":"
       << (r.was_clipped ? (*r.was_clipped ? "true" : "false") : "null")
       << ",\"update_norm\":" << fmt17(r.update_norm) << ",\"lambda_max\":"
       << json_opt(r.lambda_max) << ",\"hessian_trace\":" << json_opt(r.hessian_trace)
       << ",\"wall_ns\":" << r.wall_ns << "}\n";
  }
}

}  // namespace

void write_metrics(const std::vector<MetricsRow>& rows, std::ostream& os, MetricsFormat format) {
  if (format == MetricsFormat::kCsv) {
    write_csv(rows, os);
  } else {
    write_jsonl(rows, os);
  }
}

std::string metrics_to_string(const std::vector<MetricsRow>& rows, MetricsFormat format) {
  std::ostringstream ss;
  write_metrics(rows, ss, format);
  return ss.str();
}

void write_metrics_file(const std::vector<MetricsRow>& rows, const std::string& path,
                        MetricsFormat format) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot open metrics file '" + path + "' for writing");
  write_metrics(rows, out, format);
  if (!out.good()) throw Error(Errc::io_error, "failed writing metrics file '" + path + "'");
}

}  // namespace lesam::harness
