#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "anyonca/anyon_model.hpp"

namespace anyonca {

/// The directed graph classifying an anyon model as cyclic or non-cyclic.
///
/// One vertex per particle/anti-particle class {a, dual(a)} with a != vacuum,
/// plus an explicit vacuum sink. There is an edge (a, a-bar) -> (b, b-bar)
/// whenever N[a][a-bar][b] > 0. The sink makes "diameter = number of pair
/// fusions until the vacuum" directly computable as a longest path.
struct FusionGraph {
  struct Vertex {
    Charge rep;  // smaller charge index of the {a, dual(a)} class; 0 for sink
    std::vector<int> out;  // adjacency by vertex index
  };
  std::vector<Vertex> vertices;  // vertices[0] is the vacuum sink
  int vertex_of(Charge a) const { return vertex_index.at(a); }
  std::vector<int> vertex_index;  // charge -> vertex
};

inline FusionGraph build_fusion_graph(const AnyonModel& m) {
  auto violations = validate_model(m);
  if (!violations.empty()) {
    throw std::invalid_argument("invalid model: " + violations.front());
  }
  FusionGraph g;
  g.vertex_index.assign(m.charge_count(), 0);
  g.vertices.push_back({kVacuum, {}});
  for (size_t a = 1; a < m.charge_count(); ++a) {
    Charge ca = static_cast<Charge>(a);
    if (m.dual(ca) < ca) {
      g.vertex_index[a] = g.vertex_index[m.dual(ca)];
      continue;  // same class as its dual
    }
    g.vertex_index[a] = static_cast<int>(g.vertices.size());
    g.vertices.push_back({ca, {}});
  }
  for (size_t a = 1; a < m.charge_count(); ++a) {
    Charge ca = static_cast<Charge>(a);
    if (m.dual(ca) < ca) {
      continue;
    }
    int v = g.vertex_index[a];
    for (size_t b = 0; b < m.charge_count(); ++b) {
      if (m.fusion(ca, m.dual(ca), static_cast<Charge>(b)) > 0) {
        int w = g.vertex_index[b];
        if (!std::count(g.vertices[v].out.begin(), g.vertices[v].out.end(),
                        w)) {
          g.vertices[v].out.push_back(w);
        }
      }
    }
    std::sort(g.vertices[v].out.begin(), g.vertices[v].out.end());
  }
  return g;
}

namespace detail {

// DFS colour sweep; returns true if a cycle is reachable among non-sink
// vertices (self-loops included).
inline bool has_cycle(const FusionGraph& g, int v, std::vector<int>& colour) {
  colour[v] = 1;
  for (int w : g.vertices[v].out) {
    if (w == 0) {
      continue;  // vacuum sink has no out-edges
    }
    if (colour[w] == 1) {
      return true;
    }
    if (colour[w] == 0 && has_cycle(g, w, colour)) {
      return true;
    }
  }
  colour[v] = 2;
  return false;
}

}  // namespace detail

/// True iff the fusion graph restricted to non-vacuum vertices is acyclic.
inline bool is_non_cyclic(const FusionGraph& g) {
  std::vector<int> colour(g.vertices.size(), 0);
  for (size_t v = 1; v < g.vertices.size(); ++v) {
    if (colour[v] == 0 && detail::has_cycle(g, static_cast<int>(v), colour)) {
      return false;
    }
  }
  return true;
}

inline bool is_non_cyclic(const AnyonModel& m) {
  return is_non_cyclic(build_fusion_graph(m));
}

/// Longest directed path (in edges) from any non-vacuum vertex to the vacuum
/// sink: the worst-case number of pair fusions before reaching the vacuum.
inline int graph_diameter(const FusionGraph& g) {
  if (!is_non_cyclic(g)) {
    throw std::domain_error("diameter undefined for cyclic model");
  }
  std::vector<int> longest(g.vertices.size(), -1);
  longest[0] = 0;
  // The graph is a DAG; memoized DFS suffices.
  std::vector<int> order;
  std::vector<int> state(g.vertices.size(), 0);
  auto dfs = [&](auto&& self, int v) -> int {
    if (longest[v] >= 0) {
      return longest[v];
    }
    int best = 0;
    for (int w : g.vertices[v].out) {
      best = std::max(best, 1 + self(self, w));
    }
    return longest[v] = best;
  };
  int d = 0;
  for (size_t v = 1; v < g.vertices.size(); ++v) {
    d = std::max(d, dfs(dfs, static_cast<int>(v)));
  }
  return d;
}

inline int graph_diameter(const AnyonModel& m) {
  return graph_diameter(build_fusion_graph(m));
}

}  // namespace anyonca
