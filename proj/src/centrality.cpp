#include "hyperroles/centrality.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <limits>
#include <set>
#include <thread>

#include "hyperroles/characterization.hpp"
#include "hyperroles/error.hpp"
#include "hyperroles/lexicon.hpp"
#include "hyperroles/random.hpp"

namespace hyperroles {

LineGraph::LineGraph(std::size_t vertices,
                     std::vector<std::pair<std::uint32_t, std::uint32_t>> edges, std::size_t s)
    : s_(s) {
  for (auto& [a, b] : edges) {
    if (a >= vertices || b >= vertices) throw Error(ErrorCode::kInvalidValue, "line graph edge out of range");
    if (a == b) throw Error(ErrorCode::kInvalidValue, "line graph cannot contain self-loops");
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<std::size_t> degree(vertices + 1, 0);
  for (const auto& [a, b] : edges) {
    ++degree[a + 1];
    ++degree[b + 1];
  }
  std::partial_sum(degree.begin(), degree.end(), degree.begin());
  offsets_ = degree;
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [a, b] : edges) {
    adjacency_[cursor[a]++] = b;
    adjacency_[cursor[b]++] = a;
  }
  for (std::size_t v = 0; v < vertices; ++v) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
  }
}

std::span<const std::uint32_t> LineGraph::neighbors(std::size_t v) const {
  if (v + 1 >= offsets_.size()) throw Error(ErrorCode::kInvalidValue, "line graph vertex out of range");
  return std::span<const std::uint32_t>(adjacency_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

bool LineGraph::has_edge(std::size_t a, std::size_t b) const {
  const auto n = neighbors(a);
  return std::binary_search(n.begin(), n.end(), static_cast<std::uint32_t>(b));
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> LineGraph::edges() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  out.reserve(edge_count());
  for (std::size_t v = 0; v < vertex_count(); ++v) {
    for (auto u : neighbors(v)) {
      if (u > v) out.emplace_back(static_cast<std::uint32_t>(v), u);
    }
  }
  return out;
}

LineGraph build_line_graph(const Hypergraph& h, const LineGraphOptions& options) {
  if (options.s == 0) throw Error(ErrorCode::kInvalidValue, "line graph needs s >= 1");
  const std::size_t m = h.size();
  if (m > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kInvalidValue, "too many hyperedges for a line graph");
  }
  if (options.max_incidence != 0) {
    for (NodeId v : h.nodes()) {
      const auto size = h.incidence(v).size();
      if (size > options.max_incidence) {
        throw Error(ErrorCode::kIncidenceOverflow,
                    "node " + std::to_string(to_index(v)) + " belongs to " + std::to_string(size) +
                        " hyperedges, above the cap of " + std::to_string(options.max_incidence));
      }
    }
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::vector<std::size_t> overlap(m, 0);
  std::vector<std::uint32_t> touched;
  for (std::size_t i = 0; i < m; ++i) {
    touched.clear();
    for (NodeId v : h.edges()[i].members) {
      // Incidence lists are sorted, so skip straight to ids above i.
      const auto inc = h.incidence(v);
      auto it = std::upper_bound(inc.begin(), inc.end(), static_cast<EdgeId>(i));
      for (; it != inc.end(); ++it) {
        const auto j = to_index(*it);
        if (overlap[j]++ == 0) touched.push_back(static_cast<std::uint32_t>(j));
      }
    }
    for (auto j : touched) {
      if (overlap[j] >= options.s) pairs.emplace_back(static_cast<std::uint32_t>(i), j);
      overlap[j] = 0;
    }
  }
  return LineGraph(m, std::move(pairs), options.s);
}

namespace {

// Single-source dependency accumulation; adds delta into `scores`.
class BrandesWorkspace {
 public:
  explicit BrandesWorkspace(std::size_t n)
      : dist_(n, -1), sigma_(n, 0.0), delta_(n, 0.0) {
    order_.reserve(n);
  }

  void accumulate(const LineGraph& g, std::uint32_t source, std::vector<double>& scores) {
    order_.clear();
    dist_[source] = 0;
    sigma_[source] = 1.0;
    order_.push_back(source);
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const auto v = order_[head];
      for (auto w : g.neighbors(v)) {
        if (dist_[w] < 0) {
          dist_[w] = dist_[v] + 1;
          order_.push_back(w);
        }
        if (dist_[w] == dist_[v] + 1) sigma_[w] += sigma_[v];
      }
    }
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      const auto w = *it;
      for (auto v : g.neighbors(w)) {
        if (dist_[v] == dist_[w] - 1) delta_[v] += sigma_[v] / sigma_[w] * (1.0 + delta_[w]);
      }
      if (w != source) scores[w] += delta_[w];
    }
    for (auto v : order_) {
      dist_[v] = -1;
      sigma_[v] = 0.0;
      delta_[v] = 0.0;
    }
  }

 private:
  std::vector<int> dist_;
  std::vector<double> sigma_;
  std::vector<double> delta_;
  std::vector<std::uint32_t> order_;
};

// Sources are split into a fixed number of contiguous blocks that are summed
// in block order, so results do not depend on the thread count.
constexpr std::size_t kSourceBlocks = 16;

}  // namespace

std::vector<double> hyperedge_betweenness(const LineGraph& lg, const BetweennessOptions& options) {
  const std::size_t n = lg.vertex_count();
  std::vector<double> total(n, 0.0);
  if (n == 0) return total;

  std::vector<std::uint32_t> sources(n);
  std::iota(sources.begin(), sources.end(), 0u);
  double scale = 0.5;  // every unordered pair is reached from both endpoints
  if (options.pivots != 0 && options.pivots < n) {
    Rng rng = make_stream(options.seed, 0);
    shuffle(std::span<std::uint32_t>(sources), rng);
    sources.resize(options.pivots);
    scale *= static_cast<double>(n) / static_cast<double>(options.pivots);
  }

  const std::size_t blocks = std::min(kSourceBlocks, sources.size());
  const auto block_range = [&](std::size_t b) {
    const std::size_t begin = sources.size() * b / blocks;
    const std::size_t end = sources.size() * (b + 1) / blocks;
    return std::pair{begin, end};
  };

  std::size_t threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, blocks);

  if (threads == 1) {
    BrandesWorkspace ws(n);
    std::vector<double> partial(n);
    for (std::size_t b = 0; b < blocks; ++b) {
      std::fill(partial.begin(), partial.end(), 0.0);
      const auto [begin, end] = block_range(b);
      for (std::size_t i = begin; i < end; ++i) ws.accumulate(lg, sources[i], partial);
      for (std::size_t v = 0; v < n; ++v) total[v] += partial[v];
    }
  } else {
    std::vector<std::vector<double>> partials(blocks);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
      BrandesWorkspace ws(n);
      for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
        std::vector<double> partial(n, 0.0);
        const auto [begin, end] = block_range(b);
        for (std::size_t i = begin; i < end; ++i) ws.accumulate(lg, sources[i], partial);
        partials[b] = std::move(partial);
      }
    };
    {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (const auto& partial : partials) {
      for (std::size_t v = 0; v < n; ++v) total[v] += partial[v];
    }
  }
  for (auto& x : total) x *= scale;
  return total;
}

std::vector<RankedEdge> rank_top_k(std::span<const double> betweenness, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidValue, "top-k needs k >= 1");
  std::vector<std::uint32_t> order(betweenness.size());
  std::iota(order.begin(), order.end(), 0u);
  const auto by_score = [&](std::uint32_t a, std::uint32_t b) {
    if (betweenness[a] != betweenness[b]) return betweenness[a] > betweenness[b];
    return a < b;
  };
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(), by_score);
  std::vector<RankedEdge> out;
  out.reserve(take);
  for (std::size_t r = 0; r < take; ++r) {
    out.push_back({static_cast<EdgeId>(order[r]), betweenness[order[r]], r + 1});
  }
  return out;
}

std::vector<RankedEdge> top_k_central(const Hypergraph& h, std::size_t s, std::size_t k,
                                      const BetweennessOptions& options) {
  const auto lg = build_line_graph(h, {s, 0});
  const auto scores = hyperedge_betweenness(lg, options);
  return rank_top_k(scores, k);
}

DiscussionRecord characterize_discussion(const Hyperedge& e, std::span<const DiscussionText> texts,
                                         const ArchetypeLookup& archetype_of, WordCountAverage mode) {
  DiscussionRecord rec;
  rec.edge = e.id;

  if (archetype_of) {
    std::vector<std::int64_t> labels;
    for (NodeId v : e.members) {
      if (auto a = archetype_of(v)) labels.push_back(static_cast<std::int64_t>(*a));
    }
    if (!labels.empty()) rec.archetype_purity = omega_purity(labels);
  }

  if (texts.empty()) {
    rec.empty = true;
    return rec;
  }

  struct Counts {
    double words = 0.0;
    double unique = 0.0;
    std::size_t texts = 0;
  };
  std::vector<std::pair<NodeId, Counts>> per_author;
  Counts all;
  double subjectivity = 0.0;
  std::size_t subjectivity_n = 0;
  for (const auto& t : texts) {
    auto tokens = tokenize(t.text);
    const double words = static_cast<double>(tokens.size());
    std::sort(tokens.begin(), tokens.end());
    const double unique = static_cast<double>(std::unique(tokens.begin(), tokens.end()) - tokens.begin());
    all.words += words;
    all.unique += unique;
    ++all.texts;
    auto it = std::find_if(per_author.begin(), per_author.end(),
                           [&](const auto& p) { return p.first == t.author; });
    if (it == per_author.end()) {
      per_author.push_back({t.author, {}});
      it = per_author.end() - 1;
    }
    it->second.words += words;
    it->second.unique += unique;
    ++it->second.texts;
    if (t.subjectivity) {
      subjectivity += *t.subjectivity;
      ++subjectivity_n;
    }
  }
  if (mode == WordCountAverage::kTexts) {
    rec.avg_word_count = all.words / static_cast<double>(all.texts);
    rec.avg_unique_word_count = all.unique / static_cast<double>(all.texts);
  } else {
    double words = 0.0;
    double unique = 0.0;
    for (const auto& [author, c] : per_author) {
      words += c.words / static_cast<double>(c.texts);
      unique += c.unique / static_cast<double>(c.texts);
    }
    rec.avg_word_count = words / static_cast<double>(per_author.size());
    rec.avg_unique_word_count = unique / static_cast<double>(per_author.size());
  }
  if (subjectivity_n > 0) rec.avg_subjectivity = subjectivity / static_cast<double>(subjectivity_n);
  return rec;
}

}  // namespace hyperroles
