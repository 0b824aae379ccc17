#include "testbed/mlp.hpp"

#include <cmath>

#include "numcore/rng.hpp"
#include "numcore/tape.hpp"

namespace lesam::testbed {

using numcore::CounterRng;
using numcore::Tape;

void MlpSpec::validate() const {
  if (layer_dims.size() < 2) throw Error(Errc::validation_error, "mlp: need at least two layer dims");
  for (int d : layer_dims) {
    if (d < 1) throw Error(Errc::validation_error, "mlp: layer dims must be positive");
  }
  if (layer_dims.back() < 2) throw Error(Errc::validation_error, "mlp: output layer needs >= 2 classes");
  if (init_scale < 0.0) throw Error(Errc::validation_error, "mlp: negative init_scale");
}

int MlpSpec::param_dim() const {
  int d = 0;
  for (size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    d += layer_dims[l] * layer_dims[l + 1] + layer_dims[l + 1];
  }
  return d;
}

MlpObjective::MlpObjective(MlpSpec spec, const Batch& data) : spec_(std::move(spec)) {
  spec_.validate();
  if (!data.empty() && data.feature_dim() != spec_.layer_dims.front()) {
    throw Error(Errc::dim_mismatch, "mlp: data feature dim != input layer dim");
  }
  param_dim_ = spec_.param_dim();
  int off = 0;
  for (size_t l = 0; l + 1 < spec_.layer_dims.size(); ++l) {
    int nw = spec_.layer_dims[l] * spec_.layer_dims[l + 1];
    int nb = spec_.layer_dims[l + 1];
    groups_.push_back({off, nw});
    groups_.push_back({off + nw, nb});
    off += nw + nb;
  }
}

namespace {

void check_batch(const MlpSpec& spec, const Batch& b) {
  if (b.empty()) throw Error(Errc::validation_error, "mlp: empty batch");
  if (b.feature_dim() != spec.layer_dims.front()) {
    throw Error(Errc::dim_mismatch, "mlp: batch feature dim != input layer dim");
  }
  if (static_cast<int>(b.targets.size()) != b.size()) {
    throw Error(Errc::dim_mismatch, "mlp: target count != batch rows");
  }
}

}  // namespace

Mat MlpObjective::logits(const Vec& w, const Batch& b) const {
  check_batch(spec_, b);
  if (w.size() != param_dim_) throw Error(Errc::dim_mismatch, "mlp: parameter dim mismatch");
  Mat h = b.inputs;
  int off = 0;
  size_t layers = spec_.layer_dims.size() - 1;
  for (size_t l = 0; l < layers; ++l) {
    int nin = spec_.layer_dims[l];
    int nout = spec_.layer_dims[l + 1];
    Eigen::Map<const Mat> wl(w.data() + off, nin, nout);
    off += nin * nout;
    Eigen::Map<const Eigen::RowVectorXd> bl(w.data() + off, nout);
    off += nout;
    h = (h * wl).rowwise() + bl;
    if (l + 1 < layers) {
      if (spec_.activation == Activation::kTanh) {
        h = h.array().tanh();
      } else {
        h = h.array().max(0.0);
      }
    }
  }
  return h;
}

double MlpObjective::loss(const Vec& w, const Batch& b) const {
  Mat z = logits(w, b);
  const int m = static_cast<int>(z.rows());
  const int k = static_cast<int>(z.cols());
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    int y = b.targets[static_cast<size_t>(i)];
    if (y < 0 || y >= k) throw Error(Errc::validation_error, "mlp: label out of range");
    double zmax = z.row(i).maxCoeff();
    double sum = (z.row(i).array() - zmax).exp().sum();
    total += std::log(sum) + zmax - z(i, y);
  }
  return total / m;
}

Vec MlpObjective::grad(const Vec& w, const Batch& b) const {
  check_batch(spec_, b);
  if (w.size() != param_dim_) throw Error(Errc::dim_mismatch, "mlp: parameter dim mismatch");
  Tape tape;
  Tape::Id h = tape.leaf(b.inputs);
  size_t layers = spec_.layer_dims.size() - 1;
  std::vector<Tape::Id> wids(layers), bids(layers);
  int off = 0;
  for (size_t l = 0; l < layers; ++l) {
    int nin = spec_.layer_dims[l];
    int nout = spec_.layer_dims[l + 1];
    wids[l] = tape.leaf(Eigen::Map<const Mat>(w.data() + off, nin, nout));
    off += nin * nout;
    bids[l] = tape.leaf(Eigen::Map<const Mat>(w.data() + off, 1, nout));
    off += nout;
    h = tape.affine(h, wids[l], bids[l]);
    if (l + 1 < layers) {
      h = (spec_.activation == Activation::kTanh) ? tape.tanh_op(h) : tape.relu(h);
    }
  }
  Tape::Id root = tape.softmax_xent_mean(h, b.targets);
  tape.backward(root);

  Vec g(param_dim_);
  off = 0;
  for (size_t l = 0; l < layers; ++l) {
    int nin = spec_.layer_dims[l];
    int nout = spec_.layer_dims[l + 1];
    const Mat& gw = tape.grad(wids[l]);
    Eigen::Map<Mat>(g.data() + off, nin, nout) = gw;
    off += nin * nout;
    const Mat& gb = tape.grad(bids[l]);
    Eigen::Map<Eigen::RowVectorXd>(g.data() + off, nout) = gb.row(0);
    off += nout;
  }
  return g;
}

double MlpObjective::accuracy(const Vec& w, const Batch& b) const {
  Mat z = logits(w, b);
  int hits = 0;
  for (int i = 0; i < z.rows(); ++i) {
    int arg = 0;
    z.row(i).maxCoeff(&arg);
    if (arg == b.targets[static_cast<size_t>(i)]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(z.rows());
}

Vec mlp_init_params(const MlpSpec& spec) {
  spec.validate();
  CounterRng rng(spec.seed, 0x3117ull);
  Vec w(spec.param_dim());
  int off = 0;
  for (size_t l = 0; l + 1 < spec.layer_dims.size(); ++l) {
    int nin = spec.layer_dims[l];
    int nout = spec.layer_dims[l + 1];
    double scale = spec.init_scale / std::sqrt(static_cast<double>(nin));
    for (int i = 0; i < nin * nout; ++i) w[off + i] = scale * rng.next_gauss();
    off += nin * nout;
    for (int i = 0; i < nout; ++i) w[off + i] = 0.0;
    off += nout;
  }
  return w;
}

std::shared_ptr<MlpObjective> make_mlp(MlpSpec spec, const Batch& data) {
  return std::make_shared<MlpObjective>(std::move(spec), data);
}

}  // namespace lesam::testbed
