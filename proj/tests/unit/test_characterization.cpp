#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "hyperroles/characterization.hpp"
#include "hyperroles/error.hpp"

using namespace hyperroles;
using hyperroles::testing::ToyGraph;
using hyperroles::testing::make_graph;

namespace {
using V = std::vector<double>;
using C = std::vector<std::int64_t>;
}  // namespace

TEST(OmegaStats, Examples) {
  EXPECT_NEAR(omega_mean(V{0.2, 0.4, 0.6}), 0.4, 1e-15);
  EXPECT_EQ(omega_variance(V{0.3, 0.3, 0.3}), 0.0);
  EXPECT_DOUBLE_EQ(omega_median(V{0.1, 0.9, 0.5, 0.7}), 0.6);
  EXPECT_EQ(omega_median(V{3, 1, 2}), 2.0);
  EXPECT_EQ(omega_mode(V{0.2, 0.5, 0.5, 0.2, 0.9}), 0.2);
  EXPECT_DOUBLE_EQ(omega_variance(V{0, 1}), 0.25);
  EXPECT_DOUBLE_EQ(omega_std(V{0, 1}), 0.5);
}

TEST(OmegaMad, Examples) {
  EXPECT_EQ(omega_mad(V{0.7, 0.7}), 0.0);
  EXPECT_EQ(omega_mad(V{0, 1}), 0.5);
  EXPECT_EQ(omega_mad(V{0, 0, 1, 1}), 0.5);
}

TEST(OmegaGini, Examples) {
  EXPECT_EQ(omega_gini(V{0.4, 0.4, 0.4}), 0.0);
  EXPECT_EQ(omega_gini(V{0, 1}), 0.5);
  EXPECT_EQ(omega_gini(V{1, 1, 1, 0}), 0.25);
  EXPECT_EQ(omega_gini(V{0, 0, 0}), 0.0);
}

TEST(OmegaEntropy, Examples) {
  EXPECT_EQ(omega_entropy(C{3, 3, 3}), 0.0);
  EXPECT_NEAR(omega_entropy(C{1, 2}), std::log(2.0), 1e-15);
  EXPECT_NEAR(omega_entropy(C{1, 1, 2, 2}), std::log(2.0), 1e-15);
  // Member-indexed reading multiplies each category term by its count.
  EXPECT_NEAR(omega_entropy(C{1, 1, 2, 2}, CategorySum::kMembers), 2 * std::log(2.0), 1e-15);
}

TEST(OmegaGiniImpurity, Examples) {
  EXPECT_EQ(omega_gini_impurity(C{5, 5}), 0.0);
  EXPECT_EQ(omega_gini_impurity(C{1, 2}), 0.5);
  EXPECT_EQ(omega_gini_impurity(C{1, 1, 1, 2}), 0.375);
  EXPECT_EQ(omega_gini_impurity(C{1, 2}, CategorySum::kMembers), 0.5);
  EXPECT_EQ(omega_gini_impurity(C{1, 1, 2, 2}, CategorySum::kMembers), 0.0);
}

TEST(OmegaSize, Examples) {
  ToyGraph f;
  EXPECT_EQ(omega_size(f.h.edge(EdgeId{0})), 4u);
  EXPECT_EQ(omega_size(make_hyperedge({NodeId{1}})), 1u);
}

TEST(OmegaPurity, Examples) {
  EXPECT_EQ(omega_purity(C{2, 2, 2}), 1.0);
  EXPECT_DOUBLE_EQ(omega_purity(C{0, 0, 1}), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(omega_purity(C{0, 1, 2, 3, 4}), 0.2);
}

TEST(OmegaCohesion, Examples) {
  EXPECT_EQ(omega_cohesion(V{0.3, 0.3, 0.3}), 1.0);
  EXPECT_EQ(omega_cohesion(V{0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(omega_cohesion(V{0, 0.5, 1}), 1.0 / 3.0);
  const Similarity one = [](double, double) { return 1.0; };
  EXPECT_EQ(omega_cohesion(V{0, 0.2, 0.9, 1}, one), 1.0);
  try {
    omega_cohesion(V{0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndefined);
  }
}

TEST(InteractionPotential, ToyGraph) {
  ToyGraph f;
  EXPECT_EQ(omega_interaction_potential(f.h, EdgeId{0}, PotentialDenominator::kMembers), 0.5);
  EXPECT_EQ(omega_interaction_potential(f.h, EdgeId{0}, PotentialDenominator::kComplement), 1.0);
}

TEST(InteractionPotential, SingleEdge) {
  const auto h = make_graph({{0, 1, 2}});
  EXPECT_EQ(omega_interaction_potential(h, EdgeId{0}), 0.0);
  try {
    omega_interaction_potential(h, EdgeId{0}, PotentialDenominator::kComplement);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndefined);
  }
}

TEST(OmegaSpec, Parse) {
  const auto g = parse_omega_spec("gini:toxicity");
  EXPECT_EQ(g.kind, OmegaKind::kGini);
  EXPECT_EQ(g.feature, "toxicity");
  EXPECT_EQ(parse_omega_spec("size").kind, OmegaKind::kSize);
  EXPECT_EQ(parse_omega_spec("avg:score").kind, OmegaKind::kMean);
  EXPECT_EQ(parse_omega_spec("interaction_potential:complement").options.denominator,
            PotentialDenominator::kComplement);
  EXPECT_THROW(parse_omega_spec("mean"), Error);
  EXPECT_THROW(parse_omega_spec("kurtosis:score"), Error);
}

TEST(Omega, AttributeChecks) {
  ToyGraph f;
  NodeAttributes attrs;
  attrs.set_numeric("tox", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  attrs.set_categorical("arch", {0, 0, 1, 1, 2, -1});
  EXPECT_NEAR(omega(f.h, EdgeId{0}, parse_omega_spec("mean:tox"), attrs), 0.25, 1e-15);
  EXPECT_EQ(omega(f.h, EdgeId{0}, parse_omega_spec("purity:arch"), attrs), 0.5);
  // Categorical omega on a numeric feature.
  try {
    omega(f.h, EdgeId{0}, parse_omega_spec("entropy:tox"), attrs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaMismatch);
  }
  // F has no category.
  try {
    omega(f.h, EdgeId{3}, parse_omega_spec("purity:arch"), attrs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingFeature);
  }
  const std::vector<OmegaSpec> specs{parse_omega_spec("purity:arch"), parse_omega_spec("size")};
  const auto rows = evaluate_omegas(f.h, specs, attrs);
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_FALSE(rows[6].value.has_value());  // edge 3 = {D,F}
  EXPECT_EQ(rows[6].error, "MissingFeature");
  EXPECT_EQ(rows[7].value, 2.0);
  const std::vector<OmegaSpec> unknown{parse_omega_spec("mean:karma")};
  EXPECT_THROW(evaluate_omegas(f.h, unknown, attrs), Error);
}

// Set semantics, covariance rules and the entropy/purity/impurity equivalence.
TEST(OmegaProperty, Invariants) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.01, 1);
  for (int trial = 0; trial < 2000; ++trial) {
    V v(1 + rng() % 20);
    for (auto& x : v) x = u(rng);
    V p = v;
    std::shuffle(p.begin(), p.end(), rng);
    ASSERT_NEAR(omega_mean(v), omega_mean(p), 1e-12);
    ASSERT_NEAR(omega_gini(v), omega_gini(p), 1e-12);
    ASSERT_NEAR(omega_mad(v), omega_mad(p), 1e-12);
    ASSERT_EQ(omega_median(v), omega_median(p));
    const double c = u(rng);
    V shifted = v;
    for (auto& x : shifted) x += c;
    ASSERT_NEAR(omega_mad(shifted), omega_mad(v), 1e-12);
    ASSERT_NEAR(omega_gini(shifted), omega_gini(v) * omega_mean(v) / (omega_mean(v) + c), 1e-12);

    C cats(1 + rng() % 20);
    const auto k = 1 + rng() % 4;
    for (auto& x : cats) x = static_cast<std::int64_t>(rng() % k);
    const bool pure = omega_purity(cats) == 1.0;
    ASSERT_EQ(pure, omega_entropy(cats) == 0.0);
    ASSERT_EQ(pure, omega_gini_impurity(cats) == 0.0);
    ASSERT_GE(omega_gini_impurity(cats), 0.0);
    ASSERT_LT(omega_gini_impurity(cats), 1.0);
  }
}
