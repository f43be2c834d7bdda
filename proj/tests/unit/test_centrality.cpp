#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "hyperroles/centrality.hpp"
#include "hyperroles/error.hpp"
#include "oracles.hpp"

using namespace hyperroles;
using hyperroles::testing::ToyGraph;
using hyperroles::testing::make_graph;
using hyperroles::testing::random_graph;

namespace {
using Edges = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
}

TEST(LineGraph, ToyGraph) {
  ToyGraph f;
  const auto lg = build_line_graph(f.h);
  EXPECT_EQ(lg.edges(), (Edges{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}));
  EXPECT_EQ(build_line_graph(f.h, {2, 0}).edge_count(), 0u);
  EXPECT_THROW(build_line_graph(f.h, {0, 0}), Error);
}

TEST(LineGraph, IncidenceCap) {
  ToyGraph f;
  // D sits in three hyperedges.
  try {
    build_line_graph(f.h, {1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncidenceOverflow);
  }
  EXPECT_NO_THROW(build_line_graph(f.h, {1, 3}));
}

TEST(LineGraph, MatchesPairwiseOracle) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto h = random_graph(rng, 30, 1 + rng() % 40, 6);
    for (std::size_t s : {1u, 2u, 3u}) {
      ASSERT_EQ(build_line_graph(h, {s, 0}).edges(), oracle::line_graph_edges(h, s));
    }
  }
}

TEST(Betweenness, Examples) {
  const LineGraph path(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(hyperedge_betweenness(path), (std::vector<double>{0, 1, 0}));
  const LineGraph star(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  EXPECT_EQ(hyperedge_betweenness(star), (std::vector<double>{6, 0, 0, 0, 0}));
  Edges complete;
  for (std::uint32_t a = 0; a < 6; ++a) {
    for (std::uint32_t b = a + 1; b < 6; ++b) complete.emplace_back(a, b);
  }
  EXPECT_EQ(hyperedge_betweenness(LineGraph(6, complete)), std::vector<double>(6, 0.0));
  EXPECT_TRUE(hyperedge_betweenness(LineGraph()).empty());
}

TEST(Betweenness, MatchesOracleAndThreadCount) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto h = random_graph(rng, 40, 1 + rng() % 50, 4);
    const auto lg = build_line_graph(h);
    const auto expected = oracle::betweenness(lg.vertex_count(), lg.edges());
    const auto one = hyperedge_betweenness(lg, {1, 0, 0});
    const auto many = hyperedge_betweenness(lg, {4, 0, 0});
    ASSERT_EQ(one, many);
    for (std::size_t v = 0; v < expected.size(); ++v) {
      ASSERT_NEAR(one[v], expected[v], 1e-9 * std::max(1.0, expected[v]));
    }
  }
}

TEST(Betweenness, RelabelingInvariant) {
  std::mt19937_64 rng(6);
  const auto h = random_graph(rng, 30, 40, 4);
  const auto lg = build_line_graph(h);
  std::vector<std::uint32_t> perm(lg.vertex_count());
  std::iota(perm.begin(), perm.end(), 0u);
  std::shuffle(perm.begin(), perm.end(), rng);
  Edges relabeled;
  for (auto [a, b] : lg.edges()) relabeled.emplace_back(perm[a], perm[b]);
  const auto base = hyperedge_betweenness(lg);
  const auto moved = hyperedge_betweenness(LineGraph(lg.vertex_count(), relabeled));
  for (std::size_t v = 0; v < base.size(); ++v) EXPECT_NEAR(moved[perm[v]], base[v], 1e-9);
}

TEST(Betweenness, PivotsAllSourcesIsExact) {
  std::mt19937_64 rng(7);
  const auto lg = build_line_graph(random_graph(rng, 30, 40, 4));
  const auto exact = hyperedge_betweenness(lg);
  EXPECT_EQ(hyperedge_betweenness(lg, {1, lg.vertex_count(), 3}), hyperedge_betweenness(lg, {1, 0, 0}));
  const auto a = hyperedge_betweenness(lg, {2, 10, 9});
  const auto b = hyperedge_betweenness(lg, {3, 10, 9});
  EXPECT_EQ(a, b);
  EXPECT_EQ(exact.size(), a.size());
}

TEST(TopK, TieBreak) {
  const std::vector<double> scores{1.0, 3.0, 3.0, 0.5};
  const auto top = rank_top_k(scores, 3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].edge, EdgeId{1});
  EXPECT_EQ(top[1].edge, EdgeId{2});
  EXPECT_EQ(top[2].edge, EdgeId{0});
  EXPECT_EQ(top[2].rank, 3u);
  EXPECT_EQ(rank_top_k(scores, 50).size(), 4u);
  EXPECT_THROW(rank_top_k(scores, 0), Error);
}

TEST(TopK, ToyGraphHub) {
  ToyGraph f;
  const auto top = top_k_central(f.h, 1, 2);
  ASSERT_EQ(top.size(), 2u);
  // {D,E} touches every other discussion.
  EXPECT_EQ(top[0].edge, EdgeId{2});
}

TEST(Discussion, WordCounts) {
  const auto e = make_hyperedge({NodeId{0}, NodeId{1}});
  const std::vector<DiscussionText> texts{{NodeId{0}, "a b c", 0.2}, {NodeId{1}, "a a", std::nullopt}};
  const auto rec = characterize_discussion(e, texts, nullptr);
  EXPECT_EQ(rec.avg_word_count, 2.5);
  EXPECT_EQ(rec.avg_unique_word_count, 2.0);
  EXPECT_EQ(rec.avg_subjectivity, 0.2);
  EXPECT_FALSE(rec.archetype_purity.has_value());
  EXPECT_FALSE(rec.empty);
}

TEST(Discussion, PerAuthorAverage) {
  const auto e = make_hyperedge({NodeId{0}, NodeId{1}});
  const std::vector<DiscussionText> texts{
      {NodeId{0}, "a b c d", std::nullopt}, {NodeId{0}, "a b", std::nullopt}, {NodeId{1}, "x", std::nullopt}};
  const auto by_text = characterize_discussion(e, texts, nullptr);
  EXPECT_DOUBLE_EQ(*by_text.avg_word_count, 7.0 / 3.0);
  const auto by_user = characterize_discussion(e, texts, nullptr, WordCountAverage::kUsers);
  EXPECT_DOUBLE_EQ(*by_user.avg_word_count, (3.0 + 1.0) / 2.0);
}

TEST(Discussion, EmptyAndPurity) {
  const auto e = make_hyperedge({NodeId{0}, NodeId{1}, NodeId{2}});
  const ArchetypeLookup lookup = [](NodeId v) -> std::optional<std::size_t> {
    if (v == NodeId{2}) return std::nullopt;
    return std::size_t{4};
  };
  const auto rec = characterize_discussion(e, {}, lookup);
  EXPECT_TRUE(rec.empty);
  EXPECT_EQ(rec.archetype_purity, 1.0);
  EXPECT_FALSE(rec.avg_word_count.has_value());
}
