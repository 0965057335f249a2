#pragma once

// Search over topological orders for separable objectives F(Y) = sum_k F_k(Y_k)
// subject to acyclicity: adjacent-swap local search (TOSA), iterative
// reordering (IR), gradient descent with greedy projection (GD), seeded
// multi-start wrappers and exhaustive enumeration for small graphs.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dagopt/graph.hpp"
#include "dagopt/lasso.hpp"
#include "dagopt/matrix.hpp"
#include "dagopt/random.hpp"

namespace dagopt {

/// Objective that splits into one independent subproblem per node.
class SeparableObjective {
 public:
  virtual ~SeparableObjective() = default;
  virtual std::size_t num_nodes() const = 0;
  /// Best column k when only `candidates` may have nonzero coefficients.
  virtual ColumnFit fit_column(std::size_t k, std::span<const int> candidates) const = 0;
  /// Gradient of the smooth part, used by gradient_descent().
  virtual Matrix gradient(const CoefficientMatrix& y) const = 0;
};

/// The penalized least-squares objective on a dataset.
class LassoObjective final : public SeparableObjective {
 public:
  LassoObjective(const Dataset& x, PenaltySpec pen, LassoOptions options = {})
      : x_(x), pen_(pen), options_(std::move(options)) {}

  std::size_t num_nodes() const override { return x_.m(); }
  ColumnFit fit_column(std::size_t k, std::span<const int> candidates) const override {
    return solve_column(x_, k, candidates, pen_, options_);
  }
  Matrix gradient(const CoefficientMatrix& y) const override { return gradient_smooth(y, x_); }

  const Dataset& dataset() const { return x_; }
  PenaltySpec penalty() const { return pen_; }

 private:
  const Dataset& x_;
  PenaltySpec pen_;
  LassoOptions options_;
};

/// A feasible point: coefficients restricted to the candidate matrix of an order.
struct Solution {
  CoefficientMatrix y;
  BinaryAdjacency r;
  TopologicalOrder order;
  double objective = 0.0;
  /// Per-node contribution; objective is their sum in node order.
  std::vector<double> column_loss;
};

/// Solves every column for the candidate set implied by `order`.
Solution solve_for_order(const SeparableObjective& f, const TopologicalOrder& order);

/// Number of nonzero coefficients at the default support tolerance.
std::size_t arc_count(const Solution& s);

// ---------------------------------------------------------------------------
// TOSA

struct TosaStep {
  int t = 0;
  int s1 = 0;       // position of k1; k2 sits at s1 + 1
  int k1 = 0;
  int k2 = 0;
  bool evaluated = false;  // false when the sparsity test skipped the swap
  bool improved = false;
  std::optional<TopologicalOrder> candidate;
};

using TosaObserver = std::function<void(const TosaStep&)>;

/// Adjacent-swap local search. Stops once m consecutive iterations bring no
/// improvement; only the two swapped columns are re-solved per candidate.
Solution tosa(const Solution& start, const SeparableObjective& f, const TosaObserver& observer = {});

// ---------------------------------------------------------------------------
// Run traces

struct IterationRecord {
  int t = 0;
  double objective = 0.0;       // current iterate
  double best_objective = 0.0;
  std::size_t arc_count = 0;    // of the current iterate
  std::uint64_t order_hash = 0;
  bool order_changed = false;   // current order differs from the previous iterate's
};

using TraceSink = std::function<void(const IterationRecord&)>;

// ---------------------------------------------------------------------------
// Iterative reordering

struct IrParams {
  int t_star = 10;
  double alpha = 0.01;
  double nu_lb = 0.8;
  double nu_ub = 1.2;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Arc merit rho and arc weights w used to score nodes.
struct ArcScores {
  Matrix merit;
  Matrix weights;

  /// Weights start at 1 off the diagonal.
  static ArcScores initial(Matrix merit);
};

/// rho_jk = |x_j^T x_k| / n, zero diagonal.
Matrix merit_scores(const Dataset& x);

/// c_k = nu_k * sum_{j != k} w_jk rho_jk
std::vector<double> node_scores(const ArcScores& scores, std::span<const double> nu);

/// One uniform draw on [lb, ub] per node.
std::vector<double> draw_perturbation(Rng& rng, std::size_t m, double lb, double ub);

/// Highest score gets position 1; ties go to the smaller node index.
TopologicalOrder order_from_scores(std::span<const double> c);

/// w_jk += 1 wherever r_jk = 1.
ArcScores update_weights(ArcScores scores, const BinaryAdjacency& r);

Solution iterative_reordering(const SeparableObjective& f, const Matrix& merit, const IrParams& params,
                              const TraceSink& sink = {});
Solution iterative_reordering(const Dataset& x, PenaltySpec pen, const IrParams& params,
                              const TraceSink& sink = {});

// ---------------------------------------------------------------------------
// Gradient descent

struct GdParams {
  int t1_star = 10;
  int t2_star = 5;
  double alpha = 0.01;
  std::uint64_t seed = 0;
  int max_iters = 500;

  void validate() const;
};

struct GreedyProjection {
  TopologicalOrder order;
  CoefficientMatrix y;
  /// ||Y - U||^2 over off-diagonal entries.
  double distance = 0.0;
};

/// Fixes positions m, m-1, ..., 1 in turn, each time taking the unplaced node
/// whose column has the least squared mass over the unplaced rows. The
/// returned Y keeps U_jk exactly where position(j) > position(k).
GreedyProjection greedy_project(const Matrix& u);

/// G_jk = (1 + 1/pi_k)^pi_k off the diagonal; every entry lies in [2, e).
Matrix grad_weights(const TopologicalOrder& order);

Solution gradient_descent(const SeparableObjective& f, const GdParams& params, const TraceSink& sink = {});
Solution gradient_descent(const Dataset& x, PenaltySpec pen, const GdParams& params,
                          const TraceSink& sink = {});

// ---------------------------------------------------------------------------
// Multi-start and exhaustive search

enum class Algorithm { kIr, kGd };

struct SeedOutcome {
  std::uint64_t seed = 0;
  std::optional<Solution> solution;
  std::string error;
};

struct MultiStartResult {
  Solution best;
  std::size_t best_index = 0;
  std::vector<SeedOutcome> runs;
};

/// Runs `algo` once per seed (up to `jobs` at a time) and keeps the lowest
/// objective, ties going to the earlier seed. Throws only if every seed fails.
MultiStartResult multi_start(Algorithm algo, const SeparableObjective& f, const Matrix& merit,
                             std::span<const std::uint64_t> seeds, const IrParams& ir = {},
                             const GdParams& gd = {}, unsigned jobs = 1);
MultiStartResult multi_start(Algorithm algo, const Dataset& x, PenaltySpec pen,
                             std::span<const std::uint64_t> seeds, unsigned jobs = 1);

/// Seeds s, s+1, ..., s+count-1 mixed through mix_seed().
std::vector<std::uint64_t> derive_seeds(std::uint64_t base, std::size_t count);

inline constexpr std::size_t kMaxExhaustiveNodes = 10;

/// Best order over all m! permutations (m <= kMaxExhaustiveNodes); ties go to
/// the lexicographically first node sequence.
Solution exhaustive_search(const SeparableObjective& f);

}  // namespace dagopt
