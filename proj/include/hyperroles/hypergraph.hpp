#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hyperroles {

/// Dense interned user identifier.
enum class NodeId : std::uint32_t {};
/// Dense hyperedge index; equals the position of the hyperedge in its hypergraph.
enum class EdgeId : std::uint32_t {};

constexpr std::size_t to_index(NodeId v) noexcept { return static_cast<std::size_t>(v); }
constexpr std::size_t to_index(EdgeId e) noexcept { return static_cast<std::size_t>(e); }

/// Bijection between external user identifiers and dense NodeIds.
class NodeInterner {
 public:
  NodeId intern(std::string_view name);
  std::optional<NodeId> find(std::string_view name) const;
  const std::string& name(NodeId id) const;
  std::size_t size() const noexcept { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> ids_;
};

struct EdgeMeta {
  std::string thread_id;
  std::string community;
  int year = 0;
  int month = 0;
};

struct Hyperedge {
  EdgeId id{};
  std::vector<NodeId> members;  // sorted, unique, non-empty
  EdgeMeta meta;

  std::size_t size() const noexcept { return members.size(); }
  bool contains(NodeId v) const;
};

/// Builds a hyperedge from raw members; duplicates are dropped and the member
/// list is sorted. Throws kInvalidValue when no member is left.
Hyperedge make_hyperedge(std::vector<NodeId> members, EdgeMeta meta = {});

// Immutable after construction. Hyperedge ids are reassigned densely in the
// order the hyperedges were supplied.
class Hypergraph {
 public:
  Hypergraph() = default;
  explicit Hypergraph(std::vector<Hyperedge> edges,
                      std::span<const NodeId> isolated_nodes = {});

  std::size_t order() const noexcept { return nodes_.size(); }
  std::size_t size() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  /// Sorted node set.
  std::span<const NodeId> nodes() const noexcept { return nodes_; }
  std::span<const Hyperedge> edges() const noexcept { return edges_; }
  const Hyperedge& edge(EdgeId e) const { return edges_.at(to_index(e)); }

  bool contains(NodeId v) const noexcept;
  /// Hyperedges containing v, ascending. Throws kNodeNotFound.
  std::span<const EdgeId> incidence(NodeId v) const;

  /// One past the largest NodeId that may appear in this hypergraph.
  std::size_t node_bound() const noexcept { return present_.size(); }

 private:
  std::vector<NodeId> nodes_;
  std::vector<Hyperedge> edges_;
  std::vector<char> present_;
  std::vector<std::size_t> incidence_offsets_;
  std::vector<EdgeId> incidence_;
};

std::size_t degree(const Hypergraph& h, NodeId v);
std::size_t hyperdegree(const Hypergraph& h, NodeId v);

/// Unique-neighbour counts for every node, aligned with h.nodes().
std::vector<std::size_t> all_degrees(const Hypergraph& h);

struct SummaryStats {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t max_edge_size = 0;
  double mean_hyperdegree = 0.0;
  double mean_degree = 0.0;
};

SummaryStats summary_stats(const Hypergraph& h);

/// |a ∩ b| / |a ∪ b|, with two empty sets comparing as identical (1.0).
double jaccard_overlap(std::span<const NodeId> a, std::span<const NodeId> b);

struct Distributions {
  std::map<std::size_t, std::size_t> hyperdegree;  // hyperdegree -> #nodes
  std::map<std::size_t, std::size_t> edge_size;    // size -> #hyperedges
};

Distributions distributions(const Hypergraph& h);

/// Fraction of hyperedges whose size is at least k.
double fraction_at_least(const Distributions& d, std::size_t k);

/// Keeps hyperedges with at least k members; nodes left without incidences
/// are dropped.
Hypergraph filter_min_size(const Hypergraph& h, std::size_t k);

struct Snapshot {
  int t = 0;
  int year = 0;
  int month = 0;
  Hypergraph graph;
};

class SnapshotSeries {
 public:
  SnapshotSeries() = default;
  SnapshotSeries(std::vector<Snapshot> snapshots, std::optional<Hypergraph> aggregate);

  std::span<const Snapshot> snapshots() const noexcept { return snapshots_; }
  const std::optional<Hypergraph>& aggregate() const noexcept { return aggregate_; }
  bool empty() const noexcept { return snapshots_.empty(); }

 private:
  std::vector<Snapshot> snapshots_;
  std::optional<Hypergraph> aggregate_;
};

}  // namespace hyperroles
