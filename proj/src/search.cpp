#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "dagopt/algorithms.hpp"

namespace dagopt {

MultiStartResult multi_start(Algorithm algo, const SeparableObjective& f, const Matrix& merit,
                             std::span<const std::uint64_t> seeds, const IrParams& ir, const GdParams& gd,
                             unsigned jobs) {
  if (seeds.empty()) throw std::invalid_argument("multi_start: need at least one seed");

  std::vector<SeedOutcome> runs(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      runs[i].seed = seeds[i];
      try {
        if (algo == Algorithm::kIr) {
          IrParams p = ir;
          p.seed = seeds[i];
          runs[i].solution = iterative_reordering(f, merit, p);
        } else {
          GdParams p = gd;
          p.seed = seeds[i];
          runs[i].solution = gradient_descent(f, p);
        }
      } catch (const std::exception& e) {
        runs[i].error = e.what();
      }
    }
  };

  const unsigned width = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(seeds.size()));
  if (width == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < width; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i].solution) continue;
    if (!best || runs[i].solution->objective < runs[*best].solution->objective) best = i;
  }
  if (!best) throw std::runtime_error("multi_start: every seed failed; first error: " + runs.front().error);
  return {*runs[*best].solution, *best, std::move(runs)};
}

MultiStartResult multi_start(Algorithm algo, const Dataset& x, PenaltySpec pen,
                             std::span<const std::uint64_t> seeds, unsigned jobs) {
  const LassoObjective f(x, pen);
  const Matrix merit = algo == Algorithm::kIr ? merit_scores(x) : Matrix();
  return multi_start(algo, f, merit, seeds, IrParams{}, GdParams{}, jobs);
}

std::vector<std::uint64_t> derive_seeds(std::uint64_t base, std::size_t count) {
  std::vector<std::uint64_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = mix_seed(base + i);
  return out;
}

Solution exhaustive_search(const SeparableObjective& f) {
  const std::size_t m = f.num_nodes();
  if (m > kMaxExhaustiveNodes) throw std::invalid_argument("exhaustive_search: too many nodes");

  // Column k's optimum depends only on its candidate set, so each
  // (k, candidate mask) pair is solved once.
  std::vector<std::unordered_map<std::uint32_t, double>> cache(m);
  auto loss = [&](std::size_t k, std::uint32_t mask) {
    auto it = cache[k].find(mask);
    if (it != cache[k].end()) return it->second;
    std::vector<int> candidates;
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (1u << j)) candidates.push_back(static_cast<int>(j));
    }
    const double value = f.fit_column(k, candidates).loss;
    cache[k].emplace(mask, value);
    return value;
  };

  std::vector<int> seq(m);
  std::iota(seq.begin(), seq.end(), 0);
  std::vector<int> best_seq = seq;
  double best_value = std::numeric_limits<double>::infinity();
  do {
    // Nodes later in the sequence hold higher positions and may feed earlier ones.
    std::vector<std::uint32_t> mask(m, 0);
    std::uint32_t above = 0;
    for (std::size_t i = m; i-- > 0;) {
      mask[seq[i]] = above;
      above |= 1u << seq[i];
    }
    double value = 0.0;
    for (std::size_t k = 0; k < m; ++k) value += loss(k, mask[k]);
    if (value < best_value) {
      best_value = value;
      best_seq = seq;
    }
  } while (std::next_permutation(seq.begin(), seq.end()));

  return solve_for_order(f, TopologicalOrder::from_sequence(best_seq));
}

}  // namespace dagopt
