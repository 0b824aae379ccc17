#include "curvature/trace.hpp"

#include <cmath>

#include "numcore/rng.hpp"

namespace lesam::curvature {

using numcore::CounterRng;

TraceEstimate hutchinson_trace(const Objective& obj, const Vec& w, const Batch& b, int probes,
                               std::uint64_t seed, HvpMode mode) {
  if (probes < 1) throw Error(Errc::invalid_argument, "hutchinson_trace: probes < 1");
  CounterRng rng(seed, 0x7AACEull);
  const int d = static_cast<int>(w.size());
  double mean = 0.0;
  double m2 = 0.0;
  for (int i = 0; i < probes; ++i) {
    Vec z = rng.rademacher_vec(d);
    double est = z.dot(numcore::hvp(obj, w, z, b, mode));
    double delta = est - mean;
    mean += delta / (i + 1);
    m2 += delta * (est - mean);
  }
  TraceEstimate out;
  out.estimate = mean;
  out.probes = probes;
  out.stderr_ = (probes > 1) ? std::sqrt(m2 / (probes - 1)) / std::sqrt(static_cast<double>(probes)) : 0.0;
  return out;
}

}  // namespace lesam::curvature
