#include "hyperroles/hypergraph.hpp"

#include <algorithm>
#include <numeric>

#include "hyperroles/error.hpp"

namespace hyperroles {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kNodeNotFound: return "NodeNotFound";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kInvalidValue: return "InvalidValue";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kNoMatchingArchetype: return "NoMatchingArchetype";
    case ErrorCode::kPrototypeUnavailable: return "PrototypeUnavailable";
    case ErrorCode::kMissingFeature: return "MissingFeature";
    case ErrorCode::kUndefined: return "Undefined";
    case ErrorCode::kSpecError: return "SpecError";
    case ErrorCode::kInputError: return "InputError";
    case ErrorCode::kIncidenceOverflow: return "IncidenceOverflow";
    case ErrorCode::kStageFailure: return "StageFailure";
  }
  return "Unknown";
}

NodeId NodeInterner::intern(std::string_view name) {
  std::string key(name);
  if (auto it = ids_.find(key); it != ids_.end()) return it->second;
  const auto id = static_cast<NodeId>(names_.size());
  names_.push_back(key);
  ids_.emplace(std::move(key), id);
  return id;
}

std::optional<NodeId> NodeInterner::find(std::string_view name) const {
  if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
  return std::nullopt;
}

const std::string& NodeInterner::name(NodeId id) const {
  if (to_index(id) >= names_.size()) {
    throw Error(ErrorCode::kNodeNotFound,
                "node id " + std::to_string(to_index(id)) + " was never interned");
  }
  return names_[to_index(id)];
}

bool Hyperedge::contains(NodeId v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

Hyperedge make_hyperedge(std::vector<NodeId> members, EdgeMeta meta) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty()) {
    throw Error(ErrorCode::kInvalidValue, "hyperedge '" + meta.thread_id + "' has no members");
  }
  return Hyperedge{EdgeId{}, std::move(members), std::move(meta)};
}

Hypergraph::Hypergraph(std::vector<Hyperedge> edges, std::span<const NodeId> isolated_nodes)
    : edges_(std::move(edges)) {
  std::size_t bound = 0;
  for (NodeId v : isolated_nodes) bound = std::max(bound, to_index(v) + 1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    auto& e = edges_[i];
    e.id = static_cast<EdgeId>(i);
    if (e.members.empty()) {
      throw Error(ErrorCode::kInvalidValue, "hyperedge " + std::to_string(i) + " has no members");
    }
    if (!std::is_sorted(e.members.begin(), e.members.end()) ||
        std::adjacent_find(e.members.begin(), e.members.end()) != e.members.end()) {
      std::sort(e.members.begin(), e.members.end());
      e.members.erase(std::unique(e.members.begin(), e.members.end()), e.members.end());
    }
    bound = std::max(bound, to_index(e.members.back()) + 1);
  }

  present_.assign(bound, 0);
  for (NodeId v : isolated_nodes) present_[to_index(v)] = 1;

  std::vector<std::size_t> counts(bound + 1, 0);
  for (const auto& e : edges_) {
    for (NodeId v : e.members) {
      present_[to_index(v)] = 1;
      ++counts[to_index(v) + 1];
    }
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());
  incidence_offsets_ = counts;
  incidence_.resize(incidence_offsets_.back());
  std::vector<std::size_t> cursor(incidence_offsets_.begin(), incidence_offsets_.end() - 1);
  // Edges are visited in id order, so every incidence list comes out sorted.
  for (const auto& e : edges_) {
    for (NodeId v : e.members) incidence_[cursor[to_index(v)]++] = e.id;
  }

  for (std::size_t i = 0; i < bound; ++i) {
    if (present_[i]) nodes_.push_back(static_cast<NodeId>(i));
  }
}

bool Hypergraph::contains(NodeId v) const noexcept {
  return to_index(v) < present_.size() && present_[to_index(v)] != 0;
}

std::span<const EdgeId> Hypergraph::incidence(NodeId v) const {
  if (!contains(v)) {
    throw Error(ErrorCode::kNodeNotFound, "node " + std::to_string(to_index(v)) + " not in hypergraph");
  }
  const auto begin = incidence_offsets_[to_index(v)];
  const auto end = incidence_offsets_[to_index(v) + 1];
  return std::span<const EdgeId>(incidence_).subspan(begin, end - begin);
}

namespace {

// Stamp-based visited set so repeated neighbour counts avoid clearing memory.
class NeighborCounter {
 public:
  explicit NeighborCounter(std::size_t bound) : stamp_(bound, 0) {}

  std::size_t count(const Hypergraph& h, NodeId v) {
    ++epoch_;
    stamp_[to_index(v)] = epoch_;
    std::size_t n = 0;
    for (EdgeId e : h.incidence(v)) {
      for (NodeId u : h.edge(e).members) {
        auto& s = stamp_[to_index(u)];
        if (s != epoch_) {
          s = epoch_;
          ++n;
        }
      }
    }
    return n;
  }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

void require_non_empty(const Hypergraph& h) {
  if (h.empty()) throw Error(ErrorCode::kEmptyInput, "hypergraph has no nodes");
}

}  // namespace

std::size_t degree(const Hypergraph& h, NodeId v) {
  if (!h.contains(v)) {
    throw Error(ErrorCode::kNodeNotFound, "node " + std::to_string(to_index(v)) + " not in hypergraph");
  }
  NeighborCounter counter(h.node_bound());
  return counter.count(h, v);
}

std::size_t hyperdegree(const Hypergraph& h, NodeId v) { return h.incidence(v).size(); }

std::vector<std::size_t> all_degrees(const Hypergraph& h) {
  NeighborCounter counter(h.node_bound());
  std::vector<std::size_t> out;
  out.reserve(h.order());
  for (NodeId v : h.nodes()) out.push_back(counter.count(h, v));
  return out;
}

SummaryStats summary_stats(const Hypergraph& h) {
  require_non_empty(h);
  SummaryStats s;
  s.n = h.order();
  s.m = h.size();
  std::size_t incidences = 0;
  for (const auto& e : h.edges()) {
    s.max_edge_size = std::max(s.max_edge_size, e.size());
    incidences += e.size();
  }
  s.mean_hyperdegree = static_cast<double>(incidences) / static_cast<double>(s.n);
  const auto degs = all_degrees(h);
  const auto total = std::accumulate(degs.begin(), degs.end(), std::size_t{0});
  s.mean_degree = static_cast<double>(total) / static_cast<double>(s.n);
  return s;
}

double jaccard_overlap(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::vector<NodeId> sa(a.begin(), a.end());
  std::vector<NodeId> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
  std::sort(sb.begin(), sb.end());
  sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t common = 0;
  auto ia = sa.begin();
  auto ib = sb.begin();
  while (ia != sa.end() && ib != sb.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = sa.size() + sb.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

Distributions distributions(const Hypergraph& h) {
  require_non_empty(h);
  Distributions d;
  for (NodeId v : h.nodes()) ++d.hyperdegree[h.incidence(v).size()];
  for (const auto& e : h.edges()) ++d.edge_size[e.size()];
  return d;
}

double fraction_at_least(const Distributions& d, std::size_t k) {
  std::size_t total = 0;
  std::size_t hits = 0;
  for (const auto& [size, count] : d.edge_size) {
    total += count;
    if (size >= k) hits += count;
  }
  if (total == 0) throw Error(ErrorCode::kEmptyInput, "no hyperedges in distribution");
  return static_cast<double>(hits) / static_cast<double>(total);
}

Hypergraph filter_min_size(const Hypergraph& h, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidValue, "filter_min_size requires k >= 1");
  if (k == 1) return h;
  std::vector<Hyperedge> kept;
  for (const auto& e : h.edges()) {
    if (e.size() >= k) kept.push_back(e);
  }
  return Hypergraph(std::move(kept));
}

SnapshotSeries::SnapshotSeries(std::vector<Snapshot> snapshots, std::optional<Hypergraph> aggregate)
    : snapshots_(std::move(snapshots)), aggregate_(std::move(aggregate)) {
  for (std::size_t i = 1; i < snapshots_.size(); ++i) {
    if (snapshots_[i].t <= snapshots_[i - 1].t) {
      throw Error(ErrorCode::kInvalidValue, "snapshot timestamps must be strictly increasing");
    }
  }
}

}  // namespace hyperroles
