#pragma once

#include <Eigen/Core>

#include "numcore/error.hpp"

namespace lesam::numcore {

// Flat parameter point (and gradients, perturbations, directions).
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

double l2_norm(const Vec& v);

// Rescale v so that ||result||_2 == target. Throws ZeroDirection when
// ||v|| == 0 and target > 0; target == 0 yields the zero vector.
Vec scale_to_norm(const Vec& v, double target);

void require_same_dim(const Vec& a, const Vec& b, const char* where);

bool all_finite(const Vec& v);

}  // namespace lesam::numcore
