#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "numcore/objective.hpp"

namespace lesam::testbed {

using numcore::Batch;
using numcore::Mat;
using numcore::Objective;
using numcore::ParamGroup;
using numcore::Vec;

enum class Activation { kTanh, kRelu };

struct MlpSpec {
  std::vector<int> layer_dims{2, 16, 16, 3};
  Activation activation = Activation::kTanh;
  double init_scale = 0.5;
  std::uint64_t seed = 1;

  void validate() const;
  int param_dim() const;
};

// Fully connected softmax classifier; parameters live in one flat vector
// laid out as W1, b1, W2, b2, ... (column-major weight blocks).
class MlpObjective : public Objective {
 public:
  MlpObjective(MlpSpec spec, const Batch& data);

  int dim() const override { return param_dim_; }
  bool has_analytic_hessian() const override { return false; }
  bool stochastic() const override { return true; }

  double loss(const Vec& w, const Batch& b) const override;
  Vec grad(const Vec& w, const Batch& b) const override;
  std::vector<ParamGroup> param_groups() const override { return groups_; }

  Mat logits(const Vec& w, const Batch& b) const;
  double accuracy(const Vec& w, const Batch& b) const;

  const MlpSpec& spec() const { return spec_; }

 private:
  MlpSpec spec_;
  int param_dim_;
  std::vector<ParamGroup> groups_;  // alternating weight and bias blocks
};

Vec mlp_init_params(const MlpSpec& spec);

std::shared_ptr<MlpObjective> make_mlp(MlpSpec spec, const Batch& data);

}  // namespace lesam::testbed
