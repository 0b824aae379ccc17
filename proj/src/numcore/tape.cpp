#include "numcore/tape.hpp"

#include <cmath>
#include <string>

namespace lesam::numcore {

Tape::Node& Tape::node(Id id) { return nodes_.at(static_cast<size_t>(id)); }
const Tape::Node& Tape::node(Id id) const { return nodes_.at(static_cast<size_t>(id)); }

Tape::Id Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<Id>(nodes_.size() - 1);
}

Tape::Id Tape::leaf(Mat value) {
  Node n;
  n.op = Op::kLeaf;
  n.value = std::move(value);
  return push(std::move(n));
}

Tape::Id Tape::affine(Id x, Id w, Id b) {
  const Mat& xv = value(x);
  const Mat& wv = value(w);
  const Mat& bv = value(b);
  if (xv.cols() != wv.rows() || bv.rows() != 1 || bv.cols() != wv.cols()) {
    throw Error(Errc::dim_mismatch, "tape affine: incompatible shapes");
  }
  Node n;
  n.op = Op::kAffine;
  n.parents = {x, w, b};
  n.value = (xv * wv).rowwise() + bv.row(0);
  return push(std::move(n));
}

Tape::Id Tape::tanh_op(Id x) {
  Node n;
  n.op = Op::kTanh;
  n.parents = {x, -1, -1};
  n.value = value(x).array().tanh();
  return push(std::move(n));
}

Tape::Id Tape::relu(Id x) {
  Node n;
  n.op = Op::kRelu;
  n.parents = {x, -1, -1};
  n.value = value(x).array().max(0.0);
  return push(std::move(n));
}

Tape::Id Tape::softmax_xent_mean(Id logits, std::vector<int> labels) {
  const Mat& z = value(logits);
  const int m = static_cast<int>(z.rows());
  const int k = static_cast<int>(z.cols());
  if (m == 0 || static_cast<int>(labels.size()) != m) {
    throw Error(Errc::dim_mismatch, "tape softmax: label count != batch rows");
  }
  Node n;
  n.op = Op::kSoftmaxXent;
  n.parents = {logits, -1, -1};
  n.cached.resize(m, k);
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    int y = labels[static_cast<size_t>(i)];
    if (y < 0 || y >= k) throw Error(Errc::validation_error, "tape softmax: label out of range");
    double zmax = z.row(i).maxCoeff();
    Eigen::ArrayXd e = (z.row(i).array() - zmax).exp();
    double sum = e.sum();
    n.cached.row(i) = (e / sum).matrix();
    total += std::log(sum) + zmax - z(i, y);
  }
  n.labels = std::move(labels);
  n.value = Mat::Constant(1, 1, total / m);
  return push(std::move(n));
}

double Tape::scalar(Id id) const {
  const Mat& v = value(id);
  if (v.rows() != 1 || v.cols() != 1) throw Error(Errc::invalid_argument, "tape scalar: node is not 1x1");
  return v(0, 0);
}

const Mat& Tape::grad(Id id) const {
  const Node& n = node(id);
  if (n.grad.size() == 0) throw Error(Errc::invalid_argument, "tape grad: backward not run for node");
  return n.grad;
}

void Tape::backward(Id root) {
  if (backward_done_) throw Error(Errc::invalid_argument, "tape backward: tape already differentiated");
  backward_done_ = true;
  for (auto& n : nodes_) n.grad = Mat::Zero(n.value.rows(), n.value.cols());
  node(root).grad = Mat::Constant(node(root).value.rows(), node(root).value.cols(), 1.0);

  for (Id id = root; id >= 0; --id) {
    Node& n = node(id);
    if (n.grad.size() == 0) continue;
    switch (n.op) {
      case Op::kLeaf:
        break;
      case Op::kAffine: {
        Node& x = node(n.parents[0]);
        Node& w = node(n.parents[1]);
        Node& b = node(n.parents[2]);
        x.grad.noalias() += n.grad * w.value.transpose();
        w.grad.noalias() += x.value.transpose() * n.grad;
        b.grad.row(0) += n.grad.colwise().sum();
        break;
      }
      case Op::kTanh: {
        Node& x = node(n.parents[0]);
        x.grad.array() += n.grad.array() * (1.0 - n.value.array().square());
        break;
      }
      case Op::kRelu: {
        Node& x = node(n.parents[0]);
        x.grad.array() += n.grad.array() * (x.value.array() > 0.0).cast<double>();
        break;
      }
      case Op::kSoftmaxXent: {
        Node& z = node(n.parents[0]);
        const int m = static_cast<int>(n.cached.rows());
        Mat d = n.cached;
        for (int i = 0; i < m; ++i) d(i, n.labels[static_cast<size_t>(i)]) -= 1.0;
        z.grad.noalias() += d * (n.grad(0, 0) / m);
        break;
      }
    }
  }
}

}  // namespace lesam::numcore
