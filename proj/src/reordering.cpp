#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dagopt/algorithms.hpp"

namespace dagopt {

void IrParams::validate() const {
  if (!(nu_lb < 1.0 && 1.0 < nu_ub)) throw std::invalid_argument("IrParams: need nu_lb < 1 < nu_ub");
  if (t_star < 1) throw std::invalid_argument("IrParams: t_star must be >= 1");
  if (!(alpha >= 0.0)) throw std::invalid_argument("IrParams: alpha must be >= 0");
}

ArcScores ArcScores::initial(Matrix merit) {
  const std::size_t m = merit.rows();
  Matrix w(m, m, 1.0);
  for (std::size_t k = 0; k < m; ++k) w(k, k) = 0.0;
  return {std::move(merit), std::move(w)};
}

Matrix merit_scores(const Dataset& x) {
  const std::size_t m = x.m();
  Matrix rho(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j != k) rho(j, k) = std::fabs(x.gram()(j, k));
    }
  }
  return rho;
}

std::vector<double> node_scores(const ArcScores& scores, std::span<const double> nu) {
  const std::size_t m = scores.merit.cols();
  if (nu.size() != m) throw DimensionError("node_scores: one perturbation per node");
  std::vector<double> c(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != k) s += scores.weights(j, k) * scores.merit(j, k);
    }
    c[k] = nu[k] * s;
  }
  return c;
}

std::vector<double> draw_perturbation(Rng& rng, std::size_t m, double lb, double ub) {
  std::vector<double> nu(m);
  for (double& v : nu) v = rng.uniform(lb, ub);
  return nu;
}

TopologicalOrder order_from_scores(std::span<const double> c) {
  std::vector<int> nodes(c.size());
  std::iota(nodes.begin(), nodes.end(), 0);
  std::stable_sort(nodes.begin(), nodes.end(), [&](int a, int b) { return c[a] > c[b]; });
  return TopologicalOrder::from_sequence(nodes);
}

ArcScores update_weights(ArcScores scores, const BinaryAdjacency& r) {
  const std::size_t m = r.size();
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      if (r(j, k)) scores.weights(j, k) += 1.0;
    }
  }
  return scores;
}

Solution iterative_reordering(const SeparableObjective& f, const Matrix& merit, const IrParams& params,
                              const TraceSink& sink) {
  params.validate();
  const std::size_t m = f.num_nodes();
  if (merit.rows() != m || merit.cols() != m) throw DimensionError("iterative_reordering: merit size");

  Rng rng(params.seed);
  ArcScores scores = ArcScores::initial(merit);
  Solution best = solve_for_order(f, TopologicalOrder::from_sequence(rng.permutation(m)));
  std::optional<TopologicalOrder> previous;
  int stale = 0;

  for (int t = 1;; ++t) {
    const std::vector<double> nu = draw_perturbation(rng, m, params.nu_lb, params.nu_ub);
    const TopologicalOrder order = order_from_scores(node_scores(scores, nu));
    const Solution current = solve_for_order(f, order);

    bool updated = false;
    if (current.objective < best.objective) {
      best = current;
      updated = true;
    }
    if (current.objective < best.objective * (1.0 + params.alpha)) {
      Solution local = tosa(current, f);
      if (local.objective < best.objective) {
        best = std::move(local);
        updated = true;
      }
    }
    stale = updated ? 0 : stale + 1;
    scores = update_weights(std::move(scores), current.r);

    // The first iteration has no predecessor and never counts as converged.
    const bool converged = previous.has_value() && *previous == order;
    if (sink) {
      sink({t, current.objective, best.objective, arc_count(current), order.hash(),
            previous.has_value() && !converged});
    }
    previous = order;
    if (converged || stale >= params.t_star) break;
  }
  return best;
}

Solution iterative_reordering(const Dataset& x, PenaltySpec pen, const IrParams& params,
                              const TraceSink& sink) {
  return iterative_reordering(LassoObjective(x, pen), merit_scores(x), params, sink);
}

}  // namespace dagopt
