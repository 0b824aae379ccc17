#include "curvature/spectrum.hpp"

#include <cmath>

#include "numcore/rng.hpp"

namespace lesam::curvature {

using numcore::CounterRng;

namespace {

// Classical Gram-Schmidt projection against the eigenvectors found so far.
void deflate(Vec& v, const std::vector<Vec>& basis) {
  for (const Vec& u : basis) v -= u * u.dot(v);
}

}  // namespace

SpectrumResult power_iteration_topk(const Objective& obj, const Vec& w, const Batch& b,
                                    const SpectrumOptions& opts) {
  const int d = static_cast<int>(w.size());
  if (opts.k < 1) throw Error(Errc::invalid_argument, "power_iteration_topk: k < 1");
  if (opts.k > d) throw Error(Errc::invalid_argument, "power_iteration_topk: k exceeds dimension");
  if (opts.max_iters < 1) throw Error(Errc::invalid_argument, "power_iteration_topk: max_iters < 1");
  if (opts.tol <= 0.0) throw Error(Errc::invalid_argument, "power_iteration_topk: tol must be positive");

  CounterRng rng(opts.seed, 0x90E4ull);
  SpectrumResult out;
  for (int i = 0; i < opts.k; ++i) {
    Vec v = rng.gauss_vec(d);
    deflate(v, out.eigenvectors);
    double n = v.norm();
    if (n == 0.0) {
      v.setZero();
      v[i % d] = 1.0;
      deflate(v, out.eigenvectors);
      n = v.norm();
    }
    v /= n;

    double lambda = 0.0;
    bool conv = false;
    for (int it = 0; it < opts.max_iters; ++it) {
      Vec hv = numcore::hvp(obj, w, v, b, opts.mode);
      deflate(hv, out.eigenvectors);
      double lambda_new = v.dot(hv);
      ++out.iters_used;
      double hn = hv.norm();
      if (hn == 0.0) {
        // Exhausted the operator in this subspace; the Rayleigh quotient is 0.
        lambda = lambda_new;
        conv = true;
        break;
      }
      bool done = std::abs(lambda_new - lambda) <= opts.tol * std::max(1.0, std::abs(lambda_new));
      lambda = lambda_new;
      v = hv / hn;
      if (it > 0 && done) {
        conv = true;
        break;
      }
    }

    Vec hv = numcore::hvp(obj, w, v, b, opts.mode);
    deflate(hv, out.eigenvectors);
    lambda = v.dot(hv);
    double residual = (hv - lambda * v).norm();

    out.eigenvalues.push_back(lambda);
    out.eigenvectors.push_back(v);
    out.residuals.push_back(residual);
    out.converged.push_back(conv);
  }
  return out;
}

}  // namespace lesam::curvature
