#include <cmath>
#include <cstdlib>
#include <cstring>

#include "hyperroles/kernels.hpp"

namespace hyperroles::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double sum_sq_dev_scalar(const double* x, std::size_t n, double c) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - c;
    acc += d * d;
  }
  return acc;
}

double sum_abs_dev_scalar(const double* x, std::size_t n, double c) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i] - c);
  return acc;
}

double pairwise_abs_diff_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) acc += std::fabs(x[i] - x[j]);
  }
  return acc;
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{Isa::kScalar, "scalar", &sum_scalar, &sum_sq_dev_scalar,
                               &sum_abs_dev_scalar, &pairwise_abs_diff_scalar};
}  // namespace detail

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) noexcept {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::kAvx2 && supported(Isa::kAvx2)) return detail::kAvx2Table;
#endif
  (void)isa;
  return detail::kScalarTable;
}

const KernelTable& active() noexcept {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("HYPERROLES_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return detail::kScalarTable;
    return table(Isa::kAvx2);
  }();
  return chosen;
}

}  // namespace hyperroles::kernels
