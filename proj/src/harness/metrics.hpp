#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace lesam::harness {

enum class MetricsFormat { kCsv, kJsonl };

// One training step. Optionals render as empty CSV cells / JSON nulls.
struct MetricsRow {
  long step = 0;
  int epoch = 0;
  double loss_center = 0.0;
  std::optional<double> loss_perturbed;
  double grad_norm = 0.0;
  std::optional<double> sigma_t;
  std::optional<double> rho_raw;
  std::optional<double> rho_clipped;
  std::optional<bool> was_clipped;
  double update_norm = 0.0;
  std::optional<double> lambda_max;
  std::optional<double> hessian_trace;
  long long wall_ns = 0;
};

extern const char* const kMetricsHeader;

void write_metrics(const std::vector<MetricsRow>& rows, std::ostream& os, MetricsFormat format);
std::string metrics_to_string(const std::vector<MetricsRow>& rows, MetricsFormat format);
void write_metrics_file(const std::vector<MetricsRow>& rows, const std::string& path,
                        MetricsFormat format);

}  // namespace lesam::harness
