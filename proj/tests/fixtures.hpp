#pragma once

#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "hyperroles/hypergraph.hpp"

namespace hyperroles::testing {

// Toy hypergraph {A,B,C,D},{C,E},{D,E},{D,F},{E,F}; A..F intern to 0..5.
struct ToyGraph {
  NodeInterner names;
  Hypergraph h;

  ToyGraph() {
    for (const char* n : {"A", "B", "C", "D", "E", "F"}) names.intern(n);
    std::vector<Hyperedge> edges;
    for (const auto& e : std::vector<std::vector<std::string>>{
             {"A", "B", "C", "D"}, {"C", "E"}, {"D", "E"}, {"D", "F"}, {"E", "F"}}) {
      std::vector<NodeId> m;
      for (const auto& n : e) m.push_back(*names.find(n));
      edges.push_back(make_hyperedge(m));
    }
    h = Hypergraph(std::move(edges));
  }

  NodeId operator()(const char* n) const { return *names.find(n); }
};

inline Hypergraph make_graph(std::initializer_list<std::initializer_list<unsigned>> edges) {
  std::vector<Hyperedge> out;
  for (const auto& e : edges) {
    std::vector<NodeId> m;
    for (unsigned v : e) m.push_back(static_cast<NodeId>(v));
    out.push_back(make_hyperedge(m));
  }
  return Hypergraph(std::move(out));
}

// Random hypergraph: `edges` hyperedges over `nodes` node ids, sizes 1..max_size.
inline Hypergraph random_graph(std::mt19937_64& rng, unsigned nodes, unsigned edges, unsigned max_size) {
  std::uniform_int_distribution<unsigned> node(0, nodes - 1);
  std::uniform_int_distribution<unsigned> size(1, max_size);
  std::vector<Hyperedge> out;
  for (unsigned i = 0; i < edges; ++i) {
    std::vector<NodeId> m;
    const unsigned s = size(rng);
    for (unsigned j = 0; j < s; ++j) m.push_back(static_cast<NodeId>(node(rng)));
    out.push_back(make_hyperedge(m));
  }
  return Hypergraph(std::move(out));
}

}  // namespace hyperroles::testing
