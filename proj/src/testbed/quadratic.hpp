#pragma once

#include <memory>

#include "numcore/objective.hpp"

namespace lesam::testbed {

using numcore::Batch;
using numcore::Objective;
using numcore::Vec;

// L(w) = 1/2 * sum_i a_i (w_i - c_i)^2, all a_i > 0.
struct QuadraticSpec {
  Vec diag_a;
  Vec center;

  void validate() const;
};

class QuadraticObjective : public Objective {
 public:
  explicit QuadraticObjective(QuadraticSpec spec);

  int dim() const override { return static_cast<int>(spec_.diag_a.size()); }
  bool has_analytic_hessian() const override { return true; }
  bool stochastic() const override { return false; }

  double loss(const Vec& w, const Batch& b) const override;
  Vec grad(const Vec& w, const Batch& b) const override;
  Vec hvp_analytic(const Vec& w, const Vec& v, const Batch& b) const override;

  const QuadraticSpec& spec() const { return spec_; }

 private:
  QuadraticSpec spec_;
};

std::shared_ptr<QuadraticObjective> make_quadratic(QuadraticSpec spec);

}  // namespace lesam::testbed
