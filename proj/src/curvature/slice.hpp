#pragma once

#include <cstdint>
#include <vector>

#include "numcore/objective.hpp"

namespace lesam::curvature {

using numcore::Batch;
using numcore::Objective;
using numcore::Vec;

struct SliceOptions {
  int dims = 1;      // 1 or 2
  int grid = 41;     // odd, >= 3
  double span = 1.0; // coordinates run over [-span, span]
  std::uint64_t seed = 0;
};

struct LandscapeSlice {
  int dims = 1;
  std::vector<double> alphas;
  std::vector<double> betas;   // empty for 1-D slices
  std::vector<double> losses;  // row-major over (alpha, beta)
  std::vector<Vec> directions;
};

// Loss surface along one or two random directions rescaled per parameter
// group to match the group norms of w (whole-vector normalization when the
// objective has a single group). The center cell is the exact loss at w.
LandscapeSlice landscape_slice(const Objective& obj, const Vec& w, const Batch& b,
                               const SliceOptions& opts = {});

// Same, with caller-supplied raw directions (normalized identically).
LandscapeSlice landscape_slice_along(const Objective& obj, const Vec& w, const Batch& b,
                                     std::vector<Vec> raw_directions, const SliceOptions& opts = {});

}  // namespace lesam::curvature
