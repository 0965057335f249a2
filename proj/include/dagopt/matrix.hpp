#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dagopt {

/// Dense column-major real matrix. Columns are contiguous so that per-column
/// regressions and Gram products run over unit-stride memory.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// Row-major literal, convenient for small fixed matrices.
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

  std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
  std::span<const double> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  void set_zero();

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Entry (j,k) is the coefficient of feature j in the regression for feature k.
using CoefficientMatrix = Matrix;

/// max |a_ij - b_ij|; matrices must have equal shape.
double max_abs_diff(const Matrix& a, const Matrix& b);
/// max |a_ij|
double max_abs(const Matrix& a);
/// max over off-diagonal entries of |a_ij| (square matrices).
double max_abs_off_diagonal(const Matrix& a);

}  // namespace dagopt
