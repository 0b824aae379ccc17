#pragma once

#include <cstdint>
#include <vector>

#include "numcore/vec.hpp"

namespace lesam::numcore {

// Counter-based generator: every stream is keyed by (seed, stream id) and
// draws advance an internal counter only. Streams never interact, so
// diagnostics can consume randomness without disturbing the training stream.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double next_double();  // uniform [0, 1)
  double next_uniform(double lo, double hi);
  double next_gauss();   // standard normal, Box-Muller
  int next_below(int bound);  // uniform {0, ..., bound-1}
  double next_rademacher();   // +1 or -1

  Vec gauss_vec(int dim);
  Vec rademacher_vec(int dim);
  void shuffle(std::vector<int>& idx);

 private:
  std::uint64_t state_;
  bool has_cached_gauss_ = false;
  double cached_gauss_ = 0.0;
};

// Deterministic sub-seed derivation for nested streams.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace lesam::numcore
