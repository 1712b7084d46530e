#pragma once

#include <cstddef>
#include <vector>

#include "declearn/common.hpp"

namespace declearn {

// Label vector over the n output variables. Binary models use {0,1}; chain
// models use {0..K-1}. Variables are 0-indexed internally and 1-indexed in
// serialized formats.
using Assignment = std::vector<int>;

using FeatureVector = std::vector<double>;
using WeightVector = std::vector<double>;

// Per-variable input features: n rows by d columns, row-major. A matrix
// with a single row is broadcast to every variable (shared input).
struct InputMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  static InputMatrix zero(int rows, int cols) {
    return InputMatrix{rows, cols,
                       std::vector<double>(std::size_t(rows) * cols, 0.0)};
  }

  const double* row(int i) const {
    return data.data() + std::size_t(rows == 1 ? 0 : i) * cols;
  }
  double at(int i, int j) const { return row(i)[j]; }
};

struct Instance {
  InputMatrix x;
  Assignment gold;
};

using Dataset = std::vector<Instance>;

}  // namespace declearn
