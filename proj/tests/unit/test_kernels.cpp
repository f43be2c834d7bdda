#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hyperroles/kernels.hpp"

using namespace hyperroles::kernels;

namespace {

// Relative tolerance: the vector path reassociates the sums.
void expect_close(double a, double b) {
  EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::fabs(b)));
}

}  // namespace

TEST(Kernels, ScalarAlwaysAvailable) {
  EXPECT_TRUE(supported(Isa::kScalar));
  EXPECT_EQ(table(Isa::kScalar).isa, Isa::kScalar);
  const auto& t = table(Isa::kAvx2);
  EXPECT_EQ(t.isa, supported(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar);
}

TEST(Kernels, VectorMatchesScalar) {
  if (!supported(Isa::kAvx2)) GTEST_SKIP() << "no AVX2 on this host";
  const auto& s = table(Isa::kScalar);
  const auto& v = table(Isa::kAvx2);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-3, 3);
  // Lengths around the 4-lane boundary and tails of every width.
  for (std::size_t n = 0; n <= 67; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> x(n);
      for (auto& e : x) e = u(rng);
      const double c = u(rng);
      expect_close(v.sum(x.data(), n), s.sum(x.data(), n));
      expect_close(v.sum_sq_dev(x.data(), n, c), s.sum_sq_dev(x.data(), n, c));
      expect_close(v.sum_abs_dev(x.data(), n, c), s.sum_abs_dev(x.data(), n, c));
      expect_close(v.pairwise_abs_diff(x.data(), n), s.pairwise_abs_diff(x.data(), n));
    }
  }
}

TEST(Kernels, ExactOnSmallIntegers) {
  for (auto isa : {Isa::kScalar, Isa::kAvx2}) {
    const auto& t = table(isa);
    const double x[] = {1, 1, 1, 0, 2, 5, 3};
    EXPECT_EQ(t.sum(x, 7), 13.0);
    EXPECT_EQ(t.pairwise_abs_diff(x, 4), 3.0);
    EXPECT_EQ(t.sum_abs_dev(x, 7, 1.0), 8.0);
    EXPECT_EQ(t.sum_sq_dev(x, 7, 1.0), 22.0);
  }
}
