#include <cmath>
#include <limits>
#include <stdexcept>

#include "dagopt/algorithms.hpp"
#include "dagopt/kernels.hpp"

namespace dagopt {

void GdParams::validate() const {
  if (t1_star < 1 || t2_star < 1 || max_iters < 1) {
    throw std::invalid_argument("GdParams: counts must be >= 1");
  }
  if (t2_star > t1_star) throw std::invalid_argument("GdParams: need t2_star <= t1_star");
  if (!(alpha >= 0.0)) throw std::invalid_argument("GdParams: alpha must be >= 0");
}

GreedyProjection greedy_project(const Matrix& u) {
  const std::size_t m = u.rows();
  if (u.cols() != m) throw DimensionError("greedy_project: matrix must be square");

  std::vector<int> positions(m, 0);
  std::vector<bool> placed(m, false);
  for (int q = static_cast<int>(m); q >= 1; --q) {
    int pick = -1;
    double pick_mass = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
      if (placed[k]) continue;
      double mass = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (!placed[j] && j != k) mass += u(j, k) * u(j, k);
      }
      if (mass < pick_mass) {
        pick_mass = mass;
        pick = static_cast<int>(k);
      }
    }
    placed[pick] = true;
    positions[pick] = q;
  }

  GreedyProjection out{TopologicalOrder(std::move(positions)), CoefficientMatrix(m, m), 0.0};
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j == k) continue;
      if (out.order.position(j) > out.order.position(k)) {
        out.y(j, k) = u(j, k);
      } else {
        out.distance += u(j, k) * u(j, k);
      }
    }
  }
  return out;
}

Matrix grad_weights(const TopologicalOrder& order) {
  const std::size_t m = order.size();
  Matrix g(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    const double p = order.position(k);
    const double value = std::pow(1.0 + 1.0 / p, p);
    for (std::size_t j = 0; j < m; ++j) {
      if (j != k) g(j, k) = value;
    }
  }
  return g;
}

Solution gradient_descent(const SeparableObjective& f, const GdParams& params, const TraceSink& sink) {
  params.validate();
  const std::size_t m = f.num_nodes();
  Rng rng(params.seed);
  Solution best = solve_for_order(f, TopologicalOrder::from_sequence(rng.permutation(m)));
  Solution current = best;
  int stale = 0;

  for (int t = 1;; ++t) {
    Matrix h = f.gradient(current.y);
    const Matrix g = grad_weights(current.order);
    for (std::size_t i = 0; i < h.values().size(); ++i) h.values()[i] *= g.values()[i];

    const double y_norm = max_abs_off_diagonal(current.y);
    const double root_t = std::sqrt(static_cast<double>(t));
    // Zero iterate: fall back to a pure 1/sqrt(t) step.
    const double gamma = y_norm < 1e-8 ? 1.0 / root_t : (max_abs_off_diagonal(h) / y_norm) / root_t;

    Matrix u = current.y;
    kernels::axpy(-gamma, h.values(), u.values());
    Solution next = solve_for_order(f, greedy_project(u).order);

    bool updated = false;
    if (next.objective < best.objective) {
      best = next;
      updated = true;
    }
    if (next.objective < best.objective * (1.0 + params.alpha)) {
      Solution local = tosa(next, f);
      if (local.objective < best.objective) {
        best = local;
        next = std::move(local);
        updated = true;
      }
    }
    stale = updated ? 0 : stale + 1;

    const bool same_order = next.order == current.order;
    const bool converged = same_order && max_abs_diff(next.y, current.y) < 1e-9;
    if (sink) {
      sink({t, next.objective, best.objective, arc_count(next), next.order.hash(), !same_order});
    }
    current = stale >= params.t2_star ? best : std::move(next);
    if (converged || stale >= params.t1_star || t >= params.max_iters) break;
  }
  return best;
}

Solution gradient_descent(const Dataset& x, PenaltySpec pen, const GdParams& params, const TraceSink& sink) {
  return gradient_descent(LassoObjective(x, pen), params, sink);
}

}  // namespace dagopt
