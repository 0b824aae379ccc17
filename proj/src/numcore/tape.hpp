#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "numcore/vec.hpp"

namespace lesam::numcore {

// Reverse-mode tape over matrix-valued nodes. Nodes are appended in
// topological order by construction (an op can only reference existing ids),
// so the backward pass is a single reverse sweep. A tape is single-use:
// one forward build, one backward call.
class Tape {
 public:
  using Id = std::int32_t;

  Id leaf(Mat value);
  // x: m x n_in, w: n_in x n_out, b: 1 x n_out broadcast over rows.
  Id affine(Id x, Id w, Id b);
  Id tanh_op(Id x);
  Id relu(Id x);
  // Mean softmax cross-entropy over rows of `logits`; produces a 1x1 node.
  Id softmax_xent_mean(Id logits, std::vector<int> labels);

  const Mat& value(Id id) const { return node(id).value; }
  double scalar(Id id) const;
  const Mat& grad(Id id) const;

  void backward(Id root);

 private:
  enum class Op { kLeaf, kAffine, kTanh, kRelu, kSoftmaxXent };

  struct Node {
    Op op;
    std::array<Id, 3> parents{-1, -1, -1};
    Mat value;
    Mat grad;
    Mat cached;               // softmax probabilities
    std::vector<int> labels;  // softmax target classes
  };

  Node& node(Id id);
  const Node& node(Id id) const;
  Id push(Node n);

  std::vector<Node> nodes_;
  bool backward_done_ = false;
};

}  // namespace lesam::numcore
