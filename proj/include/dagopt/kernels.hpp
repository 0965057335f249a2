#pragma once

// Dense vector kernels used by the regression inner loops (Gram products,
// residual updates, covariance coordinate descent). Every routine has a scalar
// reference implementation; SIMD variants are picked once at startup based on
// the running CPU and can be pinned with set_kernel_isa() or the
// DAGOPT_KERNELS=scalar environment variable.

#include <cstddef>
#include <span>
#include <string_view>

namespace dagopt::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

/// Function table for one instruction-set variant.
struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  /// max_i |x_i|
  double (*max_abs)(const double* x, std::size_t n);
};

const KernelTable& scalar_table();
/// Variants compiled into this build and supported by the host CPU, scalar first.
std::span<const KernelTable* const> available_tables();

Isa active_isa();
/// Pins the variant; throws std::invalid_argument if it is not available.
void set_kernel_isa(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double sum_squares(std::span<const double> x);
double sum(std::span<const double> x);
double max_abs(std::span<const double> x);

namespace detail {
const KernelTable* avx2_table();  // nullptr when not compiled in
const KernelTable* neon_table();
}  // namespace detail

}  // namespace dagopt::kernels
