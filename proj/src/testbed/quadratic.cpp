#include "testbed/quadratic.hpp"

namespace lesam::testbed {


void QuadraticSpec::validate() const {
  if (diag_a.size() == 0) throw Error(Errc::validation_error, "quadratic: empty diagonal");
  if (center.size() != diag_a.size()) {
    throw Error(Errc::validation_error, "quadratic: center dim != diagonal dim");
  }
  if ((diag_a.array() <= 0.0).any()) {
    throw Error(Errc::validation_error, "quadratic: curvatures must be positive");
  }
}

QuadraticObjective::QuadraticObjective(QuadraticSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
}

double QuadraticObjective::loss(const Vec& w, const Batch&) const {
  return 0.5 * (spec_.diag_a.array() * (w - spec_.center).array().square()).sum();
}

Vec QuadraticObjective::grad(const Vec& w, const Batch&) const {
  return spec_.diag_a.array() * (w - spec_.center).array();
}

Vec QuadraticObjective::hvp_analytic(const Vec&, const Vec& v, const Batch&) const {
  numcore::require_same_dim(v, spec_.diag_a, "quadratic hvp");
  return spec_.diag_a.array() * v.array();
}

std::shared_ptr<QuadraticObjective> make_quadratic(QuadraticSpec spec) {
  return std::make_shared<QuadraticObjective>(std::move(spec));
}

}  // namespace lesam::testbed
