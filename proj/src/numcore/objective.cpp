#include "numcore/objective.hpp"

#include <string>

namespace lesam::numcore {

Batch Batch::rows(const std::vector<int>& idx) const {
  Batch out;
  out.inputs.resize(static_cast<int>(idx.size()), inputs.cols());
  out.targets.resize(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) {
    out.inputs.row(static_cast<int>(i)) = inputs.row(idx[i]);
    out.targets[i] = targets[idx[i]];
  }
  return out;
}

Vec Objective::hvp_analytic(const Vec&, const Vec&, const Batch&) const {
  throw Error(Errc::capability_missing, "objective has no analytic Hessian");
}

namespace {
void check_dim(const Objective& obj, const Vec& w, const char* where) {
  if (w.size() != obj.dim()) {
    throw Error(Errc::dim_mismatch, std::string(where) + ": parameter dim " +
                                        std::to_string(w.size()) + " != objective dim " +
                                        std::to_string(obj.dim()));
  }
}
}  // namespace

double eval_loss(const Objective& obj, const Vec& w, const Batch& b) {
  check_dim(obj, w, "eval_loss");
  return obj.loss(w, b);
}

Vec eval_grad(const Objective& obj, const Vec& w, const Batch& b) {
  check_dim(obj, w, "eval_grad");
  return obj.grad(w, b);
}

}  // namespace lesam::numcore
