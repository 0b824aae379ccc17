#include "numcore/vec.hpp"

#include <cmath>
#include <string>

namespace lesam::numcore {

double l2_norm(const Vec& v) { return v.norm(); }

Vec scale_to_norm(const Vec& v, double target) {
  if (target < 0.0) throw Error(Errc::invalid_argument, "scale_to_norm: negative target norm");
  if (target == 0.0) return Vec::Zero(v.size());
  double n = v.norm();
  if (n == 0.0) throw Error(Errc::zero_direction, "scale_to_norm: zero direction");
  return v * (target / n);
}

void require_same_dim(const Vec& a, const Vec& b, const char* where) {
  if (a.size() != b.size()) {
    throw Error(Errc::dim_mismatch, std::string(where) + ": dimension mismatch " +
                                        std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
}

bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace lesam::numcore
