#include "testbed/blobs.hpp"

#include "numcore/rng.hpp"

namespace lesam::testbed {

using numcore::CounterRng;
using numcore::Vec;

void BlobsSpec::validate() const {
  if (num_classes < 2) throw Error(Errc::validation_error, "blobs: need at least two classes");
  if (samples_per_class < 1) throw Error(Errc::validation_error, "blobs: samples_per_class < 1");
  if (feature_dim < 1) throw Error(Errc::validation_error, "blobs: feature_dim < 1");
  if (cluster_spread < 0.0) throw Error(Errc::validation_error, "blobs: negative spread");
}

Batch make_blobs(const BlobsSpec& spec) {
  spec.validate();
  CounterRng mean_rng(spec.seed, 0xB10B5ull);
  CounterRng sample_rng(spec.seed, 0xB10B5ull + 1);

  std::vector<Vec> means;
  means.reserve(static_cast<size_t>(spec.num_classes));
  for (int k = 0; k < spec.num_classes; ++k) {
    Vec m = mean_rng.gauss_vec(spec.feature_dim);
    double n = m.norm();
    if (n < 1e-12) {
      m.setZero();
      m[0] = 1.0;
    } else {
      m /= n;
    }
    means.push_back(std::move(m));
  }

  int total = spec.num_classes * spec.samples_per_class;
  Batch data;
  data.inputs.resize(total, spec.feature_dim);
  data.targets.resize(static_cast<size_t>(total));
  int row = 0;
  for (int k = 0; k < spec.num_classes; ++k) {
    for (int s = 0; s < spec.samples_per_class; ++s, ++row) {
      data.inputs.row(row) =
          (means[static_cast<size_t>(k)] + spec.cluster_spread * sample_rng.gauss_vec(spec.feature_dim))
              .transpose();
      data.targets[static_cast<size_t>(row)] = k;
    }
  }
  return data;
}

}  // namespace lesam::testbed
