#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "numcore/vec.hpp"

namespace lesam::numcore {

// Mini-batch view: row-per-sample features plus integer class labels.
// Analytic landscapes take an empty batch and ignore it.
struct Batch {
  Mat inputs;                // m x feature_dim
  std::vector<int> targets;  // length m

  int size() const { return static_cast<int>(inputs.rows()); }
  int feature_dim() const { return static_cast<int>(inputs.cols()); }
  bool empty() const { return inputs.rows() == 0; }

  static Batch none() { return Batch{Mat(0, 0), {}}; }
  Batch rows(const std::vector<int>& idx) const;
};

// Contiguous slice of the flat parameter vector (used for direction
// normalization on layered models).
struct ParamGroup {
  int offset;
  int length;
};

class Objective {
 public:
  virtual ~Objective() = default;

  virtual int dim() const = 0;
  virtual bool has_analytic_hessian() const = 0;
  virtual bool stochastic() const = 0;

  virtual double loss(const Vec& w, const Batch& b) const = 0;
  virtual Vec grad(const Vec& w, const Batch& b) const = 0;
  virtual Vec hvp_analytic(const Vec& w, const Vec& v, const Batch& b) const;

  virtual std::vector<ParamGroup> param_groups() const { return {{0, dim()}}; }
};

double eval_loss(const Objective& obj, const Vec& w, const Batch& b);
Vec eval_grad(const Objective& obj, const Vec& w, const Batch& b);

// Decorator counting evaluations; the harness keeps separate instances for
// the training path and the diagnostics path.
class CountingObjective : public Objective {
 public:
  explicit CountingObjective(std::shared_ptr<const Objective> inner) : inner_(std::move(inner)) {}

  int dim() const override { return inner_->dim(); }
  bool has_analytic_hessian() const override { return inner_->has_analytic_hessian(); }
  bool stochastic() const override { return inner_->stochastic(); }

  double loss(const Vec& w, const Batch& b) const override {
    ++loss_evals_;
    return inner_->loss(w, b);
  }
  Vec grad(const Vec& w, const Batch& b) const override {
    ++grad_evals_;
    return inner_->grad(w, b);
  }
  Vec hvp_analytic(const Vec& w, const Vec& v, const Batch& b) const override {
    ++hvp_evals_;
    return inner_->hvp_analytic(w, v, b);
  }
  std::vector<ParamGroup> param_groups() const override { return inner_->param_groups(); }

  long loss_evals() const { return loss_evals_; }
  long grad_evals() const { return grad_evals_; }
  long hvp_evals() const { return hvp_evals_; }
  void reset_counts() { loss_evals_ = grad_evals_ = hvp_evals_ = 0; }

 private:
  std::shared_ptr<const Objective> inner_;
  mutable long loss_evals_ = 0;
  mutable long grad_evals_ = 0;
  mutable long hvp_evals_ = 0;
};

}  // namespace lesam::numcore
