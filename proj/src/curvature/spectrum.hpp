#pragma once

#include <cstdint>
#include <vector>

#include "numcore/fd.hpp"
#include "numcore/objective.hpp"

namespace lesam::curvature {

using numcore::Batch;
using numcore::HvpMode;
using numcore::Objective;
using numcore::Vec;

struct SpectrumOptions {
  int k = 5;
  int max_iters = 200;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  HvpMode mode = HvpMode::kAuto;
};

// Eigenvalues ordered by descending magnitude (signed values reported).
// Non-converged pairs are flagged, never silently dropped.
struct SpectrumResult {
  std::vector<double> eigenvalues;
  std::vector<Vec> eigenvectors;
  std::vector<double> residuals;  // ||H v - lambda v||
  std::vector<bool> converged;
  int iters_used = 0;
};

// Deflated power iteration for the top-k Hessian eigenpairs. Convergence per
// pair: |lambda_new - lambda_old| <= tol * max(1, |lambda_new|).
SpectrumResult power_iteration_topk(const Objective& obj, const Vec& w, const Batch& b,
                                    const SpectrumOptions& opts = {});

}  // namespace lesam::curvature
