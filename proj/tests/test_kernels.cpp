#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "dagopt/kernels.hpp"
#include "dagopt/random.hpp"

using namespace dagopt;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-3.0, 3.0);
  return v;
}

double rel_err(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar table is always available and listed first") {
    const auto tables = kernels::available_tables();
    REQUIRE(!tables.empty());
    CHECK(tables.front()->isa == kernels::Isa::kScalar);
    CHECK(&kernels::scalar_table() == tables.front());
  }

  TEST_CASE("every variant agrees with the scalar reference") {
    const auto& ref = kernels::scalar_table();
    Rng rng(11);
    for (const auto* table : kernels::available_tables()) {
      CAPTURE(kernels::isa_name(table->isa));
      for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 67u, 1000u}) {
        CAPTURE(n);
        const auto a = random_vector(rng, n);
        const auto b = random_vector(rng, n);
        CHECK(rel_err(table->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n)) < 1e-12);
        CHECK(rel_err(table->sum(a.data(), n), ref.sum(a.data(), n)) < 1e-12);
        CHECK(rel_err(table->sum_squares(a.data(), n), ref.sum_squares(a.data(), n)) < 1e-12);
        CHECK(table->max_abs(a.data(), n) == ref.max_abs(a.data(), n));

        auto y1 = b;
        auto y2 = b;
        table->axpy(0.37, a.data(), y1.data(), n);
        ref.axpy(0.37, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(y1[i] - y2[i]) < 1e-14);
      }
    }
  }

  TEST_CASE("known values") {
    const std::vector<double> a{1, -2, 3};
    const std::vector<double> b{4, 5, -6};
    CHECK(kernels::dot(a, b) == doctest::Approx(4 - 10 - 18));
    CHECK(kernels::sum_squares(a) == doctest::Approx(14));
    CHECK(kernels::sum(a) == doctest::Approx(2));
    CHECK(kernels::max_abs(b) == 6);
    std::vector<double> y{1, 1, 1};
    kernels::axpy(2.0, a, y);
    CHECK(y == std::vector<double>{3, -3, 7});
  }

  TEST_CASE("the active variant can be pinned") {
    const kernels::Isa before = kernels::active_isa();
    kernels::set_kernel_isa(kernels::Isa::kScalar);
    CHECK(kernels::active_isa() == kernels::Isa::kScalar);
    bool neon_available = false;
    for (const auto* t : kernels::available_tables()) neon_available |= t->isa == kernels::Isa::kNeon;
    if (!neon_available) CHECK_THROWS_AS(kernels::set_kernel_isa(kernels::Isa::kNeon), std::invalid_argument);
    kernels::set_kernel_isa(before);
  }
}
