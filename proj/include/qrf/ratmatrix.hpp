#pragma once

#include "qrf/rational.hpp"

#include <cstddef>
#include <vector>

namespace qrf {

// Dense row-major matrix over exact rationals. Sized for phase-space
// dimensions (2N x 2N with small N), so no attention is paid to sparsity.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);

  static RatMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  RatMatrix transposed() const;
  RatMatrix operator*(const RatMatrix& rhs) const;
  RatMatrix operator-(const RatMatrix& rhs) const;
  bool operator==(const RatMatrix& rhs) const = default;

  Rational determinant() const;
  // Gauss-Jordan over exact rationals; throws std::domain_error if singular.
  RatMatrix inverse() const;

  // Largest absolute entry.
  Rational max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

}  // namespace qrf
