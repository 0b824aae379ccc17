#pragma once

#include <cstdint>

#include "numcore/fd.hpp"
#include "numcore/objective.hpp"

namespace lesam::curvature {

using numcore::Batch;
using numcore::HvpMode;
using numcore::Objective;
using numcore::Vec;

struct TraceEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;  // sample stdev / sqrt(probes); 0 by convention for one probe
  int probes = 0;
};

// Hutchinson trace estimator with Rademacher probes drawn from the given
// seed's stream.
TraceEstimate hutchinson_trace(const Objective& obj, const Vec& w, const Batch& b, int probes,
                               std::uint64_t seed, HvpMode mode = HvpMode::kAuto);

}  // namespace lesam::curvature
