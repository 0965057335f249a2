#include "dagopt/matrix.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "dagopt/kernels.hpp"

namespace dagopt {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Matrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw std::invalid_argument("Matrix::from_rows: ragged rows");
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

void Matrix::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

double max_abs_diff(const Matrix& a, const Matrix& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  double m = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) m = std::max(m, std::fabs(av[i] - bv[i]));
  return m;
}

double max_abs(const Matrix& a) { return kernels::max_abs(a.values()); }

double max_abs_off_diagonal(const Matrix& a) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.cols(); ++k) {
    for (std::size_t j = 0; j < a.rows(); ++j) {
      if (j != k) m = std::max(m, std::fabs(a(j, k)));
    }
  }
  return m;
}

}  // namespace dagopt
