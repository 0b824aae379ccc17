#pragma once

#include <cstdint>

#include "numcore/objective.hpp"

namespace lesam::testbed {

using numcore::Batch;

// Gaussian class clusters with unit-norm class means; fully deterministic
// per seed. Samples are ordered class-major.
struct BlobsSpec {
  int num_classes = 3;
  int samples_per_class = 100;
  int feature_dim = 2;
  double cluster_spread = 0.15;
  std::uint64_t seed = 12345;

  void validate() const;
};

Batch make_blobs(const BlobsSpec& spec);

}  // namespace lesam::testbed
