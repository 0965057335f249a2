#include "dagopt/lasso.hpp"

#include <algorithm>
#include <cmath>

#include "dagopt/kernels.hpp"

namespace dagopt {

namespace {

Matrix compute_gram(const Matrix& x) {
  const std::size_t m = x.cols();
  const double inv_n = 1.0 / static_cast<double>(x.rows());
  Matrix g(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j <= k; ++j) {
      const double v = kernels::dot(x.col(j), x.col(k)) * inv_n;
      g(j, k) = v;
      g(k, j) = v;
    }
  }
  return g;
}

void check_square(const CoefficientMatrix& y, const Dataset& x, const char* who) {
  if (y.rows() != x.m() || y.cols() != x.m()) {
    throw DimensionError(std::string(who) + ": coefficient matrix must be " + std::to_string(x.m()) +
                         "x" + std::to_string(x.m()));
  }
}

}  // namespace

Dataset::Dataset(Matrix values, std::vector<std::string> feature_names, bool standardized)
    : values_(std::move(values)), names_(std::move(feature_names)), standardized_(standardized) {
  if (values_.rows() < 2 || values_.cols() < 2) {
    throw DimensionError("Dataset: need n >= 2 observations and m >= 2 features");
  }
  if (names_.empty()) {
    for (std::size_t j = 0; j < values_.cols(); ++j) names_.push_back("f" + std::to_string(j + 1));
  }
  if (names_.size() != values_.cols()) throw DimensionError("Dataset: one name per feature");
  gram_ = compute_gram(values_);
}

double soft_threshold(double value, double threshold) {
  if (value > threshold) return value - threshold;
  if (value < -threshold) return value + threshold;
  return 0.0;
}

double objective(const CoefficientMatrix& y, const Dataset& x, PenaltySpec pen) {
  check_square(y, x, "objective");
  const std::size_t m = x.m();
  std::vector<double> residual(x.n());
  double sse = 0.0;
  double l1 = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    auto xk = x.column(k);
    std::copy(xk.begin(), xk.end(), residual.begin());
    for (std::size_t j = 0; j < m; ++j) {
      if (j == k || y(j, k) == 0.0) continue;
      kernels::axpy(-y(j, k), x.column(j), residual);
      l1 += std::fabs(y(j, k));
    }
    sse += kernels::sum_squares(residual);
  }
  return sse / static_cast<double>(x.n()) + pen.lambda * l1;
}

double column_loss(const Dataset& x, std::size_t k, std::span<const double> beta, PenaltySpec pen) {
  const Matrix& c = x.gram();
  const std::size_t m = x.m();
  // (1/n)||x_k - X b||^2 = C_kk - 2 b.C_k + b^T C b
  double quad = 0.0;
  double lin = 0.0;
  double l1 = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (beta[j] == 0.0 || j == k) continue;
    lin += beta[j] * c(j, k);
    l1 += std::fabs(beta[j]);
    double row = 0.0;
    for (std::size_t l = 0; l < m; ++l) {
      if (l != k) row += c(j, l) * beta[l];
    }
    quad += beta[j] * row;
  }
  return c(k, k) - 2.0 * lin + quad + pen.lambda * l1;
}

ColumnFit solve_column(const Dataset& x, std::size_t k, std::span<const int> candidates,
                       PenaltySpec pen, const LassoOptions& options) {
  const std::size_t m = x.m();
  if (k >= m) throw std::out_of_range("solve_column: node index out of range");
  for (int j : candidates) {
    if (j < 0 || static_cast<std::size_t>(j) >= m) {
      throw std::out_of_range("solve_column: candidate out of range");
    }
    if (static_cast<std::size_t>(j) == k) {
      throw std::invalid_argument("solve_column: a node cannot be its own candidate");
    }
  }
  const Matrix& c = x.gram();
  const double half_lambda = 0.5 * pen.lambda;

  ColumnFit fit;
  fit.beta.assign(m, 0.0);
  // grad[j] = C_jk - sum_l C_jl beta_l = (1/n) x_j^T r
  auto ck = c.col(k);
  std::vector<double> grad(ck.begin(), ck.end());

  auto kkt_ok = [&] {
    for (int j : candidates) {
      const double g2 = 2.0 * grad[j];
      const double b = fit.beta[j];
      const double resid =
          b == 0.0 ? std::max(0.0, std::fabs(g2) - pen.lambda) : std::fabs(g2 - std::copysign(pen.lambda, b));
      if (resid > options.kkt_tol) return false;
    }
    return true;
  };

  bool converged = candidates.empty();
  while (!converged && fit.sweeps < options.max_sweeps) {
    ++fit.sweeps;
    double max_delta = 0.0;
    for (int j : candidates) {
      const double cjj = c(j, j);
      if (cjj <= 0.0) continue;
      const double old = fit.beta[j];
      const double updated = soft_threshold(grad[j] + cjj * old, half_lambda) / cjj;
      const double delta = updated - old;
      if (delta != 0.0) {
        kernels::axpy(-delta, c.col(j), grad);
        fit.beta[j] = updated;
        max_delta = std::max(max_delta, std::fabs(delta));
      }
    }
    if (options.on_sweep) options.on_sweep(fit.beta);
    converged = max_delta < options.coef_tol && kkt_ok();
  }
  if (!converged) {
    throw ConvergenceError("solve_column: no convergence for column " + std::to_string(k + 1) +
                               " after " + std::to_string(options.max_sweeps) + " sweeps",
                           fit.beta);
  }
  fit.loss = column_loss(x, k, fit.beta, pen);
  return fit;
}

CoefficientMatrix solve_restricted(const Dataset& x, const BinaryAdjacency& r, PenaltySpec pen,
                                   const LassoOptions& options) {
  if (r.size() != x.m()) throw DimensionError("solve_restricted: candidate matrix size mismatch");
  (void)topological_order_of(r);
  const std::size_t m = x.m();
  CoefficientMatrix y(m, m);
  std::vector<int> candidates;
  for (std::size_t k = 0; k < m; ++k) {
    candidates.clear();
    for (std::size_t j = 0; j < m; ++j) {
      if (r(j, k)) candidates.push_back(static_cast<int>(j));
    }
    ColumnFit fit = solve_column(x, k, candidates, pen, options);
    std::copy(fit.beta.begin(), fit.beta.end(), y.col(k).begin());
  }
  return y;
}

Matrix gradient_smooth(const CoefficientMatrix& y, const Dataset& x) {
  check_square(y, x, "gradient_smooth");
  const std::size_t m = x.m();
  const Matrix& c = x.gram();
  Matrix grad(m, m);
  std::vector<double> col(m);
  for (std::size_t k = 0; k < m; ++k) {
    // col = C_k - C y_k (diagonal of y ignored)
    auto ck = c.col(k);
    std::copy(ck.begin(), ck.end(), col.begin());
    for (std::size_t l = 0; l < m; ++l) {
      if (l != k && y(l, k) != 0.0) kernels::axpy(-y(l, k), c.col(l), col);
    }
    for (std::size_t j = 0; j < m; ++j) grad(j, k) = j == k ? 0.0 : -2.0 * col[j];
  }
  return grad;
}

}  // namespace dagopt
