#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hyperroles/hypergraph.hpp"

namespace hyperroles {

/// Undirected simple graph over hyperedge ids; (i, j) is an edge iff the two
/// hyperedges share at least s members. Stored as sorted adjacency (CSR).
class LineGraph {
 public:
  LineGraph() = default;
  LineGraph(std::size_t vertices, std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
            std::size_t s = 1);

  std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }
  std::size_t s() const noexcept { return s_; }

  std::span<const std::uint32_t> neighbors(std::size_t v) const;
  bool has_edge(std::size_t a, std::size_t b) const;
  /// Edge list with a < b, lexicographically sorted.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const;

 private:
  std::size_t s_ = 1;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> adjacency_;
};

struct LineGraphOptions {
  std::size_t s = 1;
  /// Upper bound on any node's incidence list; 0 disables the check.
  std::size_t max_incidence = 0;
};

/// Pairs are discovered by joining hyperedges through each node's incidence
/// list. Throws kIncidenceOverflow when a node exceeds max_incidence.
LineGraph build_line_graph(const Hypergraph& h, const LineGraphOptions& options = {});

struct BetweennessOptions {
  std::size_t threads = 0;  // 0: hardware concurrency
  /// 0 computes exact betweenness; otherwise sources are sampled and the
  /// accumulated dependencies scaled by n / pivots.
  std::size_t pivots = 0;
  std::uint64_t seed = 0;
};

/// Unnormalized shortest-path betweenness over unordered vertex pairs.
std::vector<double> hyperedge_betweenness(const LineGraph& lg, const BetweennessOptions& options = {});

struct RankedEdge {
  EdgeId edge{};
  double betweenness = 0.0;
  std::size_t rank = 0;  // 1-based
};

/// k largest scores, descending; ties go to the smaller hyperedge id.
std::vector<RankedEdge> rank_top_k(std::span<const double> betweenness, std::size_t k);

std::vector<RankedEdge> top_k_central(const Hypergraph& h, std::size_t s, std::size_t k = 50,
                                      const BetweennessOptions& options = {});

struct DiscussionText {
  NodeId author{};
  std::string text;
  std::optional<double> subjectivity;
};

enum class WordCountAverage {
  kTexts,  // mean over every text in the discussion
  kUsers,  // mean over authors of their per-author mean
};

struct DiscussionRecord {
  EdgeId edge{};
  std::optional<double> avg_word_count;
  std::optional<double> avg_unique_word_count;
  std::optional<double> avg_subjectivity;
  std::optional<double> archetype_purity;
  bool empty = false;  // no texts for this discussion
};

using ArchetypeLookup = std::function<std::optional<std::size_t>(NodeId)>;

/// Word statistics use the lexicon tokenizer; purity is taken over the
/// members with a known archetype.
DiscussionRecord characterize_discussion(const Hyperedge& e, std::span<const DiscussionText> texts,
                                         const ArchetypeLookup& archetype_of,
                                         WordCountAverage mode = WordCountAverage::kTexts);

}  // namespace hyperroles
