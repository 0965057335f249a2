#include <algorithm>
#include <cmath>
#include <numeric>

#include "dagopt/algorithms.hpp"

namespace dagopt {

namespace {

std::vector<int> candidates_for(const TopologicalOrder& order, std::size_t k) {
  std::vector<int> out;
  for (std::size_t j = 0; j < order.size(); ++j) {
    if (order.position(j) > order.position(k)) out.push_back(static_cast<int>(j));
  }
  return out;
}

void store_column(Solution& s, std::size_t k, ColumnFit&& fit) {
  std::copy(fit.beta.begin(), fit.beta.end(), s.y.col(k).begin());
  s.column_loss[k] = fit.loss;
}

double total(const std::vector<double>& losses) {
  return std::accumulate(losses.begin(), losses.end(), 0.0);
}

}  // namespace

Solution solve_for_order(const SeparableObjective& f, const TopologicalOrder& order) {
  const std::size_t m = f.num_nodes();
  if (order.size() != m) throw DimensionError("solve_for_order: order size mismatch");
  Solution s{CoefficientMatrix(m, m), adj(order), order, 0.0, std::vector<double>(m, 0.0)};
  for (std::size_t k = 0; k < m; ++k) store_column(s, k, f.fit_column(k, candidates_for(order, k)));
  s.objective = total(s.column_loss);
  return s;
}

std::size_t arc_count(const Solution& s) { return support(s.y).count(); }

Solution tosa(const Solution& start, const SeparableObjective& f, const TosaObserver& observer) {
  Solution best = start;
  const int m = static_cast<int>(f.num_nodes());
  if (m < 2) return best;

  int t = 0;
  int since_improvement = 0;
  while (since_improvement < m) {
    ++t;
    TosaStep step;
    step.t = t;
    step.s1 = (t - 1) % (m - 1) + 1;
    step.k1 = best.order.node_at(step.s1);
    step.k2 = best.order.node_at(step.s1 + 1);

    // Arc k2 -> k1 is the only candidate the swap removes; if it is unused the
    // swap cannot change column k1's optimum.
    if (std::fabs(best.y(step.k2, step.k1)) > 0.0) {
      step.evaluated = true;
      TopologicalOrder order = best.order;
      order.swap_nodes(step.k1, step.k2);
      step.candidate = order;

      ColumnFit fit1 = f.fit_column(step.k1, candidates_for(order, step.k1));
      ColumnFit fit2 = f.fit_column(step.k2, candidates_for(order, step.k2));
      std::vector<double> losses = best.column_loss;
      losses[step.k1] = fit1.loss;
      losses[step.k2] = fit2.loss;
      const double candidate_objective = total(losses);
      if (candidate_objective < best.objective) {
        store_column(best, step.k1, std::move(fit1));
        store_column(best, step.k2, std::move(fit2));
        best.order = std::move(order);
        best.r = adj(best.order);
        best.objective = total(best.column_loss);
        step.improved = true;
      }
    }
    since_improvement = step.improved ? 0 : since_improvement + 1;
    if (observer) observer(step);
  }
  return best;
}

}  // namespace dagopt
