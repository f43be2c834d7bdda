#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Reduction kernels behind the numeric hyperedge characterizations. Each
// kernel has a portable scalar reference and, on x86-64, an AVX2 variant;
// the variant is picked once at runtime from CPUID. Setting the environment
// variable HYPERROLES_SIMD=scalar forces the reference path.

namespace hyperroles::kernels {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  Isa isa;
  std::string_view name;
  double (*sum)(const double* x, std::size_t n);
  double (*sum_sq_dev)(const double* x, std::size_t n, double center);
  double (*sum_abs_dev)(const double* x, std::size_t n, double center);
  /// sum over unordered pairs i < j of |x_i - x_j|
  double (*pairwise_abs_diff)(const double* x, std::size_t n);
};

bool supported(Isa isa) noexcept;
/// Table for a specific ISA; falls back to scalar if unsupported.
const KernelTable& table(Isa isa) noexcept;
/// Table chosen at first use.
const KernelTable& active() noexcept;

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline double sum_sq_dev(std::span<const double> x, double c) {
  return active().sum_sq_dev(x.data(), x.size(), c);
}
inline double sum_abs_dev(std::span<const double> x, double c) {
  return active().sum_abs_dev(x.data(), x.size(), c);
}
inline double pairwise_abs_diff(std::span<const double> x) {
  return active().pairwise_abs_diff(x.data(), x.size());
}

namespace detail {
extern const KernelTable kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace hyperroles::kernels
