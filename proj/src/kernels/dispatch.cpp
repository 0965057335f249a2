#include <atomic>
#include <cassert>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "dagopt/kernels.hpp"

namespace dagopt::kernels {

namespace detail {
#if !defined(DAGOPT_HAVE_AVX2)
const KernelTable* avx2_table() { return nullptr; }
#endif
#if !defined(DAGOPT_HAVE_NEON)
const KernelTable* neon_table() { return nullptr; }
#endif
}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::vector<const KernelTable*> detect() {
  std::vector<const KernelTable*> tables{&scalar_table()};
  if (const KernelTable* t = detail::avx2_table(); t != nullptr && cpu_has_avx2()) {
    tables.push_back(t);
  }
  // NEON is mandatory on aarch64, so a compiled-in table is always usable.
  if (const KernelTable* t = detail::neon_table(); t != nullptr) tables.push_back(t);
  return tables;
}

const std::vector<const KernelTable*>& tables() {
  static const std::vector<const KernelTable*> kTables = detect();
  return kTables;
}

const KernelTable* initial_choice() {
  const char* env = std::getenv("DAGOPT_KERNELS");
  if (env != nullptr && std::string(env) == "scalar") return &scalar_table();
  return tables().back();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_choice()};
  return table;
}

inline const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

std::span<const KernelTable* const> available_tables() { return tables(); }

Isa active_isa() { return active().isa; }

void set_kernel_isa(Isa isa) {
  for (const KernelTable* t : tables()) {
    if (t->isa == isa) {
      current().store(t);
      return;
    }
  }
  throw std::invalid_argument("kernel variant not available: " + std::string(isa_name(isa)));
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

double sum_squares(std::span<const double> x) { return active().sum_squares(x.data(), x.size()); }

double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }

}  // namespace dagopt::kernels
