#pragma once

#include <string>

#include "numcore/objective.hpp"

namespace lesam::testbed {

// Loads a dataset from CSV: one header row, then feature columns followed by
// a single integer label column. Non-finite cells are rejected.
numcore::Batch load_csv(const std::string& path);

}  // namespace lesam::testbed
