#include <doctest.h>

#include <cmath>

#include "test_support.hpp"

using namespace dagopt;
using namespace testing;

TEST_SUITE("lasso") {
  TEST_CASE("soft_threshold") {
    CHECK(soft_threshold(3.0, 1.0) == 2.0);
    CHECK(soft_threshold(-3.0, 1.0) == -2.0);
    CHECK(soft_threshold(0.5, 1.0) == 0.0);
    CHECK(soft_threshold(-1.0, 1.0) == 0.0);
    CHECK(soft_threshold(2.0, 0.0) == 2.0);
  }

  TEST_CASE("objective of Y = 0 on standardized data equals m") {
    for (std::size_t m : {2u, 5u, 9u}) {
      const Dataset x = random_dataset(m, 40, 3 + m);
      CHECK(objective(Matrix(m, m), x, PenaltySpec(0.7)) == doctest::Approx(static_cast<double>(m)).epsilon(1e-12));
    }
  }

  TEST_CASE("objective from residuals agrees with the Gram-based column losses") {
    const Dataset x = random_dataset(6, 30, 8);
    Rng rng(2);
    Matrix y(6, 6);
    for (std::size_t j = 0; j < 6; ++j)
      for (std::size_t k = 0; k < 6; ++k)
        if (j != k && rng.uniform01() < 0.5) y(j, k) = rng.uniform(-1, 1);
    const PenaltySpec pen(0.3);
    double sum = 0.0;
    for (std::size_t k = 0; k < 6; ++k) sum += column_loss(x, k, y.col(k), pen);
    CHECK(objective(y, x, pen) == doctest::Approx(sum).epsilon(1e-12));
  }

  TEST_CASE("lambda = 0 reproduces ordinary least squares") {
    const Dataset x = random_dataset(6, 80, 21, 2.0);
    const std::size_t k = 4;
    const std::vector<int> cands{0, 2, 5};
    const ColumnFit fit = solve_column(x, k, cands, PenaltySpec(0.0));
    std::vector<std::vector<double>> a(cands.size(), std::vector<double>(cands.size()));
    std::vector<double> b(cands.size());
    for (std::size_t r = 0; r < cands.size(); ++r) {
      b[r] = x.gram()(cands[r], k);
      for (std::size_t c = 0; c < cands.size(); ++c) a[r][c] = x.gram()(cands[r], cands[c]);
    }
    const auto ols = solve_linear(a, b);
    for (std::size_t r = 0; r < cands.size(); ++r) CHECK(fit.beta[cands[r]] == doctest::Approx(ols[r]).epsilon(1e-6));
    CHECK(fit.beta[1] == 0.0);
    CHECK(fit.beta[3] == 0.0);
    CHECK(fit.beta[k] == 0.0);
  }

  TEST_CASE("empty candidate set gives a zero column") {
    const Dataset x = random_dataset(4, 20, 1);
    const ColumnFit fit = solve_column(x, 2, {}, PenaltySpec(0.1));
    for (double b : fit.beta) CHECK(b == 0.0);
    CHECK(fit.loss == doctest::Approx(x.gram()(2, 2)));
    CHECK(fit.sweeps == 0);
  }

  TEST_CASE("single candidate matches the closed-form soft threshold") {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
      const Dataset x = random_dataset(5, 30, 100 + trial);
      const std::size_t k = rng.below(5);
      std::size_t j = rng.below(5);
      if (j == k) j = (j + 1) % 5;
      const double lambda = rng.uniform(0.0, 1.0);
      const int cand = static_cast<int>(j);
      const ColumnFit fit = solve_column(x, k, std::span<const int>(&cand, 1), PenaltySpec(lambda));
      const double expected = soft_threshold(x.gram()(j, k), lambda / 2.0) / x.gram()(j, j);
      CHECK(std::fabs(fit.beta[j] - expected) < 1e-9);
    }
  }

  TEST_CASE("large lambda zeroes every coefficient") {
    const Dataset x = random_dataset(7, 50, 44, 3.0);
    const double lambda = 2.0 * max_abs_off_diagonal(x.gram()) + 1e-9;
    const Matrix y = solve_restricted(x, adj(TopologicalOrder::identity(7)), PenaltySpec(lambda));
    CHECK(max_abs(y) == 0.0);
  }

  TEST_CASE("KKT conditions hold for random columns") {
    Rng rng(77);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t m = 3 + rng.below(6);
      const Dataset x = random_dataset(m, 25 + rng.below(60), 500 + trial, 1.0 + rng.uniform01());
      const std::size_t k = rng.below(m);
      std::vector<int> cands;
      for (int j : all_but(m, k))
        if (rng.uniform01() < 0.7) cands.push_back(j);
      const double lambda = rng.uniform(0.0, 0.6);
      const ColumnFit fit = solve_column(x, k, cands, PenaltySpec(lambda));
      CHECK(kkt_residual(x, k, cands, fit.beta, lambda) < 1e-7);
    }
  }

  TEST_CASE("column loss never increases across sweeps") {
    Rng rng(4);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t m = 6;
      const Dataset x = noise_dataset(m, 12, 900 + trial);  // n small: strongly correlated columns
      const std::size_t k = rng.below(m);
      const auto cands = all_but(m, k);
      const PenaltySpec pen(rng.uniform(0.01, 0.3));
      std::vector<double> losses{x.gram()(k, k)};
      LassoOptions opts;
      opts.on_sweep = [&](std::span<const double> beta) { losses.push_back(column_loss(x, k, beta, pen)); };
      solve_column(x, k, cands, pen, opts);
      REQUIRE(losses.size() >= 2);
      for (std::size_t i = 1; i < losses.size(); ++i) CHECK(losses[i] <= losses[i - 1] + 1e-12);
    }
  }

  TEST_CASE("ConvergenceError carries the last iterate") {
    const Dataset x = noise_dataset(5, 8, 3);
    LassoOptions opts;
    opts.max_sweeps = 1;
    opts.coef_tol = 0.0;
    try {
      solve_column(x, 0, all_but(5, 0), PenaltySpec(0.0), opts);
      FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
      CHECK(e.last_iterate().size() == 5);
    }
  }

  TEST_CASE("smooth gradient matches finite differences") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      const Dataset x = noise_dataset(5, 5 + rng.below(30), 40 + trial);
      Matrix y(5, 5);
      for (std::size_t j = 0; j < 5; ++j)
        for (std::size_t k = 0; k < 5; ++k)
          if (j != k) y(j, k) = rng.uniform(-1, 1);
      const Matrix g = gradient_smooth(y, x);
      const double h = 1e-6;
      for (std::size_t j = 0; j < 5; ++j) {
        for (std::size_t k = 0; k < 5; ++k) {
          if (j == k) {
            CHECK(g(j, k) == 0.0);
            continue;
          }
          Matrix up = y, down = y;
          up(j, k) += h;
          down(j, k) -= h;
          const double fd = (objective(up, x, PenaltySpec(0)) - objective(down, x, PenaltySpec(0))) / (2 * h);
          CHECK(std::fabs(fd - g(j, k)) < 1e-5 * std::max(1.0, std::fabs(fd)));
        }
      }
    }
  }

  TEST_CASE("gradient vanishes on the free entries at an unpenalized optimum") {
    const Dataset x = random_dataset(6, 60, 13, 2.0);
    const auto order = TopologicalOrder::from_sequence(std::vector<int>{3, 1, 5, 0, 2, 4});
    const BinaryAdjacency r = adj(order);
    LassoOptions tight;
    tight.coef_tol = 1e-12;
    tight.kkt_tol = 1e-11;
    const Matrix y = solve_restricted(x, r, PenaltySpec(0.0), tight);
    const Matrix g = gradient_smooth(y, x);
    for (const auto& [j, k] : r.arcs()) CHECK(std::fabs(g(j, k)) < 1e-8);
  }

  TEST_CASE("solve_restricted rejects a cyclic candidate matrix") {
    const Dataset x = random_dataset(3, 20, 2);
    CHECK_THROWS_AS(solve_restricted(x, BinaryAdjacency::from_rows({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}), PenaltySpec(0.1)),
                    CycleError);
    CHECK_THROWS_AS(solve_restricted(x, BinaryAdjacency(4), PenaltySpec(0.1)), DimensionError);
  }

  TEST_CASE("solve_restricted is column separable and zero outside r") {
    const Dataset x = random_dataset(7, 40, 66, 2.0);
    const BinaryAdjacency r = adj(TopologicalOrder::from_sequence(std::vector<int>{6, 2, 0, 4, 1, 5, 3}));
    const PenaltySpec pen(0.05);
    const Matrix y = solve_restricted(x, r, pen);
    for (std::size_t k = 0; k < 7; ++k) {
      std::vector<int> cands;
      for (std::size_t j = 0; j < 7; ++j)
        if (r(j, k)) cands.push_back(static_cast<int>(j));
      const ColumnFit fit = solve_column(x, k, cands, pen);
      for (std::size_t j = 0; j < 7; ++j) {
        CHECK(y(j, k) == fit.beta[j]);
        if (!r(j, k)) CHECK(y(j, k) == 0.0);
      }
    }
  }

  TEST_CASE("larger lambda: objective does not decrease, L1 norm does not increase") {
    const Dataset x = random_dataset(6, 50, 8, 2.5);
    const BinaryAdjacency r = adj(TopologicalOrder::identity(6));
    double prev_obj = -1.0;
    double prev_l1 = std::numeric_limits<double>::infinity();
    for (double lambda : {0.0, 0.01, 0.05, 0.1, 0.3, 1.0}) {
      const Matrix y = solve_restricted(x, r, PenaltySpec(lambda));
      const double obj = objective(y, x, PenaltySpec(lambda));
      double l1 = 0.0;
      for (double v : y.values()) l1 += std::fabs(v);
      CHECK(obj >= prev_obj - 1e-10);
      CHECK(l1 <= prev_l1 + 1e-7);
      prev_obj = obj;
      prev_l1 = l1;
    }
  }

  TEST_CASE("input validation") {
    CHECK_THROWS_AS(PenaltySpec(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(PenaltySpec(std::nan("")), std::invalid_argument);
    const Dataset x = random_dataset(4, 20, 5);
    const std::vector<int> self{1};
    CHECK_THROWS_AS(solve_column(x, 1, self, PenaltySpec(0.1)), std::invalid_argument);
    const std::vector<int> out_of_range{7};
    CHECK_THROWS_AS(solve_column(x, 1, out_of_range, PenaltySpec(0.1)), std::out_of_range);
    CHECK_THROWS_AS(solve_column(x, 9, {}, PenaltySpec(0.1)), std::out_of_range);
    CHECK_THROWS_AS(objective(Matrix(3, 3), x, PenaltySpec(0.1)), DimensionError);
    CHECK_THROWS_AS(Dataset(Matrix(1, 3), {}, false), DimensionError);
    CHECK_THROWS_AS(Dataset(Matrix(3, 2), {"a"}, false), DimensionError);
  }
}
