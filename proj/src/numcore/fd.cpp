#include "numcore/fd.hpp"

#include <cmath>

namespace lesam::numcore {

Vec fd_grad(const Objective& obj, const Vec& w, const Batch& b, double h) {
  if (h <= 0.0) throw Error(Errc::invalid_argument, "fd_grad: step h must be positive");
  if (w.size() != obj.dim()) throw Error(Errc::dim_mismatch, "fd_grad: parameter dim mismatch");
  Vec g(w.size());
  Vec wp = w;
  for (int i = 0; i < w.size(); ++i) {
    double hi = h * std::max(1.0, std::abs(w[i]));
    double orig = w[i];
    wp[i] = orig + hi;
    double lp = obj.loss(wp, b);
    wp[i] = orig - hi;
    double lm = obj.loss(wp, b);
    wp[i] = orig;
    g[i] = (lp - lm) / (2.0 * hi);
  }
  return g;
}

Vec hvp(const Objective& obj, const Vec& w, const Vec& v, const Batch& b, HvpMode mode) {
  require_same_dim(w, v, "hvp");
  if (w.size() != obj.dim()) throw Error(Errc::dim_mismatch, "hvp: parameter dim mismatch");
  if (mode == HvpMode::kAuto) {
    mode = obj.has_analytic_hessian() ? HvpMode::kAnalytic : HvpMode::kFd;
  }
  if (mode == HvpMode::kAnalytic) return obj.hvp_analytic(w, v, b);
  double h = 1e-4 / std::max(1.0, v.norm());
  Vec gp = obj.grad(w + h * v, b);
  Vec gm = obj.grad(w - h * v, b);
  return (gp - gm) / (2.0 * h);
}

}  // namespace lesam::numcore
