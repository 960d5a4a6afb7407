#pragma once

#include <cstddef>
#include <vector>

namespace qrc {

/// Row-major dense matrix of doubles. Deliberately minimal: the hot paths
/// go through the kernel table, this type just owns storage and strides.
struct Matrix {
  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : data(r * c, 0.0), rows(r), cols(c) {}

  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

}  // namespace qrc
