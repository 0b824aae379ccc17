#include "optim/schedule.hpp"

#include <cmath>

#include "numcore/error.hpp"

namespace lesam::optim {

double cosine_anneal_sigma(double sigma0, double epoch, int anneal_len_epochs, int total_epochs) {
  if (sigma0 < 0.0) throw Error(Errc::invalid_argument, "cosine_anneal_sigma: negative sigma0");
  if (total_epochs < 1) throw Error(Errc::invalid_argument, "cosine_anneal_sigma: total_epochs < 1");
  if (anneal_len_epochs < 0 || anneal_len_epochs > total_epochs) {
    throw Error(Errc::invalid_argument, "cosine_anneal_sigma: anneal window outside [0, total]");
  }
  if (anneal_len_epochs == 0) return sigma0;
  double start = static_cast<double>(total_epochs - anneal_len_epochs);
  if (epoch < start) return sigma0;
  double frac = (epoch - start) / static_cast<double>(anneal_len_epochs);
  return sigma0 * 0.5 * (1.0 + std::cos(M_PI * frac));
}

}  // namespace lesam::optim
