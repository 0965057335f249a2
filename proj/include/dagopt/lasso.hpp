#pragma once

// L1-penalized least squares over a feature matrix:
//
//   F(Y) = (1/n) sum_k || x_k - X y_k ||^2 + lambda * sum_k sum_{j != k} |y_jk|
//
// No intercepts: columns are expected to be centered (see standardize()).

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dagopt/graph.hpp"
#include "dagopt/matrix.hpp"

namespace dagopt {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// n x m observations. Immutable; the scaled Gram matrix X^T X / n is computed
/// once at construction because every column solve works from it.
class Dataset {
 public:
  Dataset(Matrix values, std::vector<std::string> feature_names, bool standardized);

  std::size_t n() const { return values_.rows(); }
  std::size_t m() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  std::span<const double> column(std::size_t j) const { return values_.col(j); }
  const std::vector<std::string>& feature_names() const { return names_; }
  bool standardized() const { return standardized_; }
  /// (1/n) X^T X
  const Matrix& gram() const { return gram_; }

 private:
  Matrix values_;
  std::vector<std::string> names_;
  bool standardized_;
  Matrix gram_;
};

struct PenaltySpec {
  double lambda = 0.0;

  explicit PenaltySpec(double l) : lambda(l) {
    if (!(l >= 0.0)) throw std::invalid_argument("PenaltySpec: lambda must be >= 0");
  }
};

struct LassoOptions {
  int max_sweeps = 10000;
  /// Converged when no coefficient moves more than this in a sweep.
  double coef_tol = 1e-9;
  /// Subgradient residual required on top of coef_tol before stopping.
  double kkt_tol = 1e-8;
  /// Called after every sweep with the current (length m) coefficient column.
  std::function<void(std::span<const double>)> on_sweep;
};

/// Solution of one column subproblem. beta has length m and is zero outside
/// the candidate set; loss is the penalized column objective.
struct ColumnFit {
  std::vector<double> beta;
  double loss = 0.0;
  int sweeps = 0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate)
      : std::runtime_error(what), last_iterate_(std::move(last_iterate)) {}
  const std::vector<double>& last_iterate() const { return last_iterate_; }

 private:
  std::vector<double> last_iterate_;
};

double soft_threshold(double value, double threshold);

/// F(Y) evaluated from explicit residuals (not from the Gram matrix).
double objective(const CoefficientMatrix& y, const Dataset& x, PenaltySpec pen);

/// Penalized loss of column k from the Gram matrix.
double column_loss(const Dataset& x, std::size_t k, std::span<const double> beta, PenaltySpec pen);

/// Cyclic coordinate descent with covariance updates for column k restricted
/// to `candidates` (which must not contain k).
ColumnFit solve_column(const Dataset& x, std::size_t k, std::span<const int> candidates,
                       PenaltySpec pen, const LassoOptions& options = {});

/// Column k uses candidates {j : r_jk = 1}. Throws CycleError for cyclic r.
CoefficientMatrix solve_restricted(const Dataset& x, const BinaryAdjacency& r, PenaltySpec pen,
                                   const LassoOptions& options = {});

/// Gradient of the smooth (squared error) part: entry (j,k) is
/// -(2/n) x_j^T (x_k - X y_k) for j != k, zero on the diagonal.
Matrix gradient_smooth(const CoefficientMatrix& y, const Dataset& x);

}  // namespace dagopt
