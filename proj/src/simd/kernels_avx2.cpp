#include "hyperroles/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

// Compiled with per-function target attributes so the rest of the binary
// stays baseline x86-64; callers reach these only after a CPUID check.

namespace hyperroles::kernels {
namespace {

#define HR_AVX2 __attribute__((target("avx2")))

HR_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

HR_AVX2 inline __m256d vabs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

HR_AVX2 double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i];
  return hsum(acc) + tail;
}

HR_AVX2 double sum_sq_dev_avx2(const double* x, std::size_t n, double c) {
  const __m256d vc = _mm256_set1_pd(c);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vc);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += (x[i] - c) * (x[i] - c);
  return hsum(acc) + tail;
}

HR_AVX2 double sum_abs_dev_avx2(const double* x, std::size_t n, double c) {
  const __m256d vc = _mm256_set1_pd(c);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, vabs(_mm256_sub_pd(_mm256_loadu_pd(x + i), vc)));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += std::fabs(x[i] - c);
  return hsum(acc) + tail;
}

HR_AVX2 double pairwise_abs_diff_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  double tail = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const __m256d xi = _mm256_set1_pd(x[i]);
    std::size_t j = i + 1;
    for (; j + 4 <= n; j += 4) {
      acc = _mm256_add_pd(acc, vabs(_mm256_sub_pd(_mm256_loadu_pd(x + j), xi)));
    }
    for (; j < n; ++j) tail += std::fabs(x[i] - x[j]);
  }
  return hsum(acc) + tail;
}

#undef HR_AVX2

}  // namespace

namespace detail {
const KernelTable kAvx2Table{Isa::kAvx2, "avx2", &sum_avx2, &sum_sq_dev_avx2, &sum_abs_dev_avx2,
                             &pairwise_abs_diff_avx2};
}  // namespace detail

}  // namespace hyperroles::kernels

#endif
