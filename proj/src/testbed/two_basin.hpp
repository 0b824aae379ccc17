#pragma once

#include <memory>
#include <optional>

#include "numcore/objective.hpp"

namespace lesam::testbed {

using numcore::Batch;
using numcore::Objective;
using numcore::Vec;

// L(w) = A - A exp(-||w-m1||^2 / (2 s1^2)) - A exp(-||w-m2||^2 / (2 s2^2)),
// s1 > s2, so basin 1 is the flat one. Curvature at a center is A/s^2 when
// the basins are far enough apart for cross terms to vanish; see
// well_separated() for the guideline used by the curvature-oracle tests.
struct TwoBasinSpec {
  double depth = 1.0;  // A
  Vec m1;
  Vec m2;
  double s1 = 2.0;
  double s2 = 0.2;

  void validate() const;
  bool well_separated() const;  // ||m1 - m2|| > 3 (s1 + s2)

  static TwoBasinSpec default_1d();
};

class TwoBasinObjective : public Objective {
 public:
  explicit TwoBasinObjective(TwoBasinSpec spec);

  int dim() const override { return static_cast<int>(spec_.m1.size()); }
  bool has_analytic_hessian() const override { return true; }
  bool stochastic() const override { return false; }

  double loss(const Vec& w, const Batch& b) const override;
  Vec grad(const Vec& w, const Batch& b) const override;
  Vec hvp_analytic(const Vec& w, const Vec& v, const Batch& b) const override;

  const TwoBasinSpec& spec() const { return spec_; }

  // 1 = flat basin, 2 = sharp basin, nullopt when w is not within 3 s_i of
  // the nearest center.
  std::optional<int> basin_id(const Vec& w) const;

 private:
  TwoBasinSpec spec_;
};

std::shared_ptr<TwoBasinObjective> make_two_basin(TwoBasinSpec spec);

}  // namespace lesam::testbed
