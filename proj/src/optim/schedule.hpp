#pragma once

namespace lesam::optim {

// Cosine budget annealing: sigma stays at sigma0 until epoch T - n, then
// follows half a cosine down to exactly 0 at epoch T. n = 0 disables the
// schedule.
double cosine_anneal_sigma(double sigma0, double epoch, int anneal_len_epochs, int total_epochs);

}  // namespace lesam::optim
