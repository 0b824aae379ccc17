#pragma once

#include <memory>

#include "numcore/objective.hpp"
#include "numcore/rng.hpp"
#include "numcore/vec.hpp"

namespace lesam::test {

using numcore::Batch;
using numcore::Mat;
using numcore::Vec;

// Dense quadratic 0.5 (w - c)^T A (w - c) with a full symmetric A; exercises
// off-diagonal curvature that the diagonal testbeds cannot.
class DenseQuadratic : public numcore::Objective {
 public:
  DenseQuadratic(Mat a, Vec c) : a_(std::move(a)), c_(std::move(c)) {}

  int dim() const override { return static_cast<int>(c_.size()); }
  bool has_analytic_hessian() const override { return true; }
  bool stochastic() const override { return false; }

  double loss(const Vec& w, const Batch&) const override {
    Vec d = w - c_;
    return 0.5 * d.dot(a_ * d);
  }
  Vec grad(const Vec& w, const Batch&) const override { return a_ * (w - c_); }
  Vec hvp_analytic(const Vec&, const Vec& v, const Batch&) const override { return a_ * v; }

  const Mat& matrix() const { return a_; }

 private:
  Mat a_;
  Vec c_;
};

inline Mat random_symmetric(int dim, std::uint64_t seed) {
  numcore::CounterRng rng(seed, 0xA11CEull);
  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = rng.next_gauss();
  }
  return Mat(0.5 * (m + m.transpose()));
}

inline Vec random_vec(int dim, std::uint64_t seed, std::uint64_t stream = 0xF00Dull) {
  numcore::CounterRng rng(seed, stream);
  return rng.gauss_vec(dim);
}

}  // namespace lesam::test
