#include "testbed/two_basin.hpp"

#include <cmath>

namespace lesam::testbed {


void TwoBasinSpec::validate() const {
  if (m1.size() == 0 || m1.size() != m2.size()) {
    throw Error(Errc::validation_error, "two_basin: centers missing or dims differ");
  }
  if (depth <= 0.0) throw Error(Errc::validation_error, "two_basin: depth must be positive");
  if (!(s1 > s2) || s2 <= 0.0) {
    throw Error(Errc::validation_error, "two_basin: widths must satisfy s1 > s2 > 0");
  }
  if ((m1 - m2).norm() == 0.0) throw Error(Errc::validation_error, "two_basin: centers coincide");
}

bool TwoBasinSpec::well_separated() const { return (m1 - m2).norm() > 3.0 * (s1 + s2); }

TwoBasinSpec TwoBasinSpec::default_1d() {
  TwoBasinSpec s;
  s.depth = 1.0;
  s.m1 = Vec::Constant(1, -2.0);
  s.m2 = Vec::Constant(1, 2.0);
  s.s1 = 2.0;
  s.s2 = 0.2;
  return s;
}

TwoBasinObjective::TwoBasinObjective(TwoBasinSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
}

double TwoBasinObjective::loss(const Vec& w, const Batch&) const {
  double e1 = std::exp(-(w - spec_.m1).squaredNorm() / (2.0 * spec_.s1 * spec_.s1));
  double e2 = std::exp(-(w - spec_.m2).squaredNorm() / (2.0 * spec_.s2 * spec_.s2));
  return spec_.depth - spec_.depth * e1 - spec_.depth * e2;
}

Vec TwoBasinObjective::grad(const Vec& w, const Batch&) const {
  Vec d1 = w - spec_.m1;
  Vec d2 = w - spec_.m2;
  double v1 = spec_.s1 * spec_.s1;
  double v2 = spec_.s2 * spec_.s2;
  double e1 = std::exp(-d1.squaredNorm() / (2.0 * v1));
  double e2 = std::exp(-d2.squaredNorm() / (2.0 * v2));
  return (spec_.depth * e1 / v1) * d1 + (spec_.depth * e2 / v2) * d2;
}

Vec TwoBasinObjective::hvp_analytic(const Vec& w, const Vec& v, const Batch&) const {
  numcore::require_same_dim(w, v, "two_basin hvp");
  Vec d1 = w - spec_.m1;
  Vec d2 = w - spec_.m2;
  double v1 = spec_.s1 * spec_.s1;
  double v2 = spec_.s2 * spec_.s2;
  double e1 = std::exp(-d1.squaredNorm() / (2.0 * v1));
  double e2 = std::exp(-d2.squaredNorm() / (2.0 * v2));
  Vec out = (spec_.depth * e1 / v1) * (v - d1 * (d1.dot(v) / v1));
  out += (spec_.depth * e2 / v2) * (v - d2 * (d2.dot(v) / v2));
  return out;
}

std::optional<int> TwoBasinObjective::basin_id(const Vec& w) const {
  double dist1 = (w - spec_.m1).norm();
  double dist2 = (w - spec_.m2).norm();
  if (dist1 <= dist2) {
    if (dist1 < 3.0 * spec_.s1) return 1;
  } else {
    if (dist2 < 3.0 * spec_.s2) return 2;
  }
  return std::nullopt;
}

std::shared_ptr<TwoBasinObjective> make_two_basin(TwoBasinSpec spec) {
  return std::make_shared<TwoBasinObjective>(std::move(spec));
}

}  // namespace lesam::testbed
