#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "hyperroles/error.hpp"
#include "hyperroles/features.hpp"

using namespace hyperroles;

TEST(Normalize, Affine) {
  const std::vector<double> in{0, 5, 10};
  EXPECT_EQ(normalize(in), (std::vector<double>{0, 0.5, 1}));
}

TEST(Normalize, UnitRangeUnchanged) {
  const std::vector<double> in{0, 0.25, 1, 0.75};
  EXPECT_EQ(normalize(in), in);
}

TEST(Normalize, SignedRescale) {
  const std::vector<double> in{-1, -0.5, 0, 0.2, 1};
  const auto out = normalize(in);
  for (std::size_t i = 0; i < in.size(); ++i) EXPECT_DOUBLE_EQ(out[i], (in[i] + 1) / 2);
}

TEST(Normalize, ConstantMapsToHalf) {
  const std::vector<double> in{3, 3, 3};
  EXPECT_EQ(normalize(in), (std::vector<double>{0.5, 0.5, 0.5}));
}

TEST(Normalize, RejectsBadInput) {
  const std::vector<double> nan{1, std::numeric_limits<double>::quiet_NaN()};
  const std::vector<double> inf{1, std::numeric_limits<double>::infinity()};
  try {
    normalize(nan);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidValue);
  }
  EXPECT_THROW(normalize(inf), Error);
  EXPECT_THROW(normalize(std::vector<double>{}), Error);
}

TEST(Label, WorkedExample) {
  // A = <1, 0.5>, T = <0, 0.75> -> <high, low>
  EXPECT_EQ(label(1.0, 0.0), Label::kHigh);
  EXPECT_EQ(label(0.5, 0.75), Label::kLow);
  EXPECT_EQ(label(0.75, 0.75), Label::kLow);
  EXPECT_EQ(label(0.51, 0.5), Label::kHigh);
}

namespace {
FeatureVector fv3(double a, double b, double c) { return {NodeId{0}, 0, {a, b, c}}; }
}  // namespace

TEST(LabeledVector, Examples) {
  const auto schema = default_user_schema();
  const auto tv = default_thresholds();
  EXPECT_EQ(to_string(labeled_vector(schema, fv3(0.8, 0.7, 0.1), tv)), "HHL");
  EXPECT_EQ(to_string(labeled_vector(schema, fv3(0.5, 0.5, 0.5), tv)), "LLL");
  EXPECT_EQ(to_string(labeled_vector(schema, fv3(0.4, 0.9, 0.9), tv)), "LHH");
}

TEST(LabeledVector, MissingFeature) {
  const auto schema = default_user_schema();
  ThresholdVector tv{{"score", "karma"}, {0.5, 0.5}};
  try {
    labeled_vector(schema, fv3(0.1, 0.2, 0.3), tv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaMismatch);
  }
}

TEST(LabelTuple, ParseAndPrint) {
  EXPECT_EQ(to_string(parse_labels("h|h|l")), "HHL");
  EXPECT_EQ(to_string(parse_labels("L, H, H")), "LHH");
  EXPECT_THROW(parse_labels("HXL"), Error);
}

TEST(FeatureSchema, Validation) {
  EXPECT_THROW(FeatureSchema({{"a"}, {"a"}}), Error);
  EXPECT_THROW(FeatureSchema({{"a", FeatureKind::kNumeric, 0.0, std::numeric_limits<double>::infinity()}}), Error);
  const FeatureSchema s({{"a"}, {"b"}});
  EXPECT_EQ(s.index_of("b"), 1u);
  EXPECT_EQ(s.index_of("c"), std::nullopt);
}

TEST(FeatureProperty, LabelMonotone) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 10000; ++i) {
    const double t = u(rng), a = u(rng), b = u(rng);
    const double lo = std::min(a, b), hi = std::max(a, b);
    // high at lo implies high at hi
    if (label(lo, t) == Label::kHigh) EXPECT_EQ(label(hi, t), Label::kHigh);
  }
}

TEST(FeatureProperty, NormalizeOrderPreservingAndIdempotent) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(2 + rng() % 20);
    for (auto& x : v) x = u(rng);
    const auto n = normalize(v);
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[i] < v[j]) ASSERT_LE(n[i], n[j]);
      }
    }
    const auto twice = normalize(n);
    for (std::size_t i = 0; i < v.size(); ++i) ASSERT_NEAR(twice[i], n[i], 1e-15);
  }
}

TEST(FeatureProperty, LabelsInvariantUnderIncreasingTransform) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  const auto transform = [](double x) { return std::exp(3 * x) - 7; };
  const auto schema = default_user_schema();
  for (int trial = 0; trial < 1000; ++trial) {
    const auto fv = fv3(u(rng), u(rng), u(rng));
    ThresholdVector tv = default_thresholds();
    for (auto& t : tv.thresholds) t = u(rng);
    auto fv2 = fv;
    auto tv2 = tv;
    for (auto& x : fv2.values) x = transform(x);
    for (auto& t : tv2.thresholds) t = transform(t);
    ASSERT_EQ(labeled_vector(schema, fv, tv), labeled_vector(schema, fv2, tv2));
  }
}
