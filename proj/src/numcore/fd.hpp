#pragma once

#include "numcore/objective.hpp"

namespace lesam::numcore {

// Central-difference gradient with relative per-coordinate stepping
// h_i = h * max(1, |w_i|). Independent of the objective's own grad path, so
// it serves as the gradient oracle in tests.
Vec fd_grad(const Objective& obj, const Vec& w, const Batch& b, double h = 1e-5);

enum class HvpMode { kAnalytic, kFd, kAuto };

// Hessian-vector product. Fd mode uses central differences of gradients with
// h = 1e-4 / max(1, ||v||). Auto picks analytic when the objective has one.
Vec hvp(const Objective& obj, const Vec& w, const Vec& v, const Batch& b,
        HvpMode mode = HvpMode::kAuto);

}  // namespace lesam::numcore
