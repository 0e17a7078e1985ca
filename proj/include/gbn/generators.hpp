#pragma once

// Seeded graph generators: random sensor networks, planted-partition
// community graphs, Barabasi-Albert networks, and small fixtures.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gbn/error.hpp"
#include "gbn/graph.hpp"

namespace gbn {

enum class GraphFamily { sensor, community, barabasi_albert, path, grid, complete };

inline std::string to_string(GraphFamily f) {
  switch (f) {
    case GraphFamily::sensor: return "sensor";
    case GraphFamily::community: return "community";
    case GraphFamily::barabasi_albert: return "barabasi-albert";
    case GraphFamily::path: return "path";
    case GraphFamily::grid: return "grid";
    case GraphFamily::complete: return "complete";
  }
  return "unknown";
}

inline GraphFamily parse_graph_family(const std::string& name) {
  if (name == "sensor") return GraphFamily::sensor;
  if (name == "community") return GraphFamily::community;
  if (name == "barabasi-albert" || name == "ba") return GraphFamily::barabasi_albert;
  if (name == "path") return GraphFamily::path;
  if (name == "grid") return GraphFamily::grid;
  if (name == "complete") return GraphFamily::complete;
  throw ValidationError("unknown graph family '" + name + "'");
}

struct GeneratorSpec {
  GraphFamily family = GraphFamily::sensor;
  std::size_t n = 0;
  std::size_t k_max = 6;           // sensor
  std::size_t n_communities = 16;  // community
  double p_in = 0.3;               // community
  double p_out = 0.005;            // community
  std::size_t m_attach = 2;        // barabasi-albert
  std::size_t rows = 0;            // grid
  std::size_t cols = 0;            // grid
  std::uint64_t seed = 0;

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

struct GeneratedGraph {
  Graph graph;
  std::vector<Edge> repairs;  // bridging edges added to reach connectivity
};

namespace detail {

// Repeatedly adds the lightest edge joining two different components until
// the graph is connected. `weight_of(u, v)` prices a candidate; ties go to
// the lexicographically smallest (u, v).
template <typename WeightFn>
std::vector<Edge> connect_components(std::size_t n, std::vector<Edge>& edges, WeightFn&& weight_of) {
  std::vector<Edge> added;
  for (;;) {
    const auto label = component_labels(n, edges);
    const bool connected = std::all_of(label.begin(), label.end(), [](std::size_t l) { return l == 0; });
    if (connected) break;
    Edge best{0, 0, std::numeric_limits<double>::infinity()};
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (label[u] == label[v]) continue;
        const double w = weight_of(u, v);
        if (w < best.w) best = {u, v, w};
      }
    }
    edges.push_back(best);
    added.push_back(best);
  }
  return added;
}

}  // namespace detail

inline Graph path_graph(std::size_t n) {
  if (n < 1) throw ValidationError("path_graph: n must be >= 1");
  std::vector<Edge> edges;
  for (NodeId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 1.0});
  return Graph(n, std::move(edges));
}

inline Graph complete_graph(std::size_t n) {
  if (n < 1) throw ValidationError("complete_graph: n must be >= 1");
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
  }
  return Graph(n, std::move(edges));
}

/// 4-neighbour lattice; node (r, c) has id r * cols + c.
inline Graph grid_graph(std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1) throw ValidationError("grid_graph: rows and cols must be >= 1");
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const NodeId v = r * cols + c;
      if (c + 1 < cols) edges.push_back({v, v + 1, 1.0});
      if (r + 1 < rows) edges.push_back({v, v + cols, 1.0});
    }
  }
  return Graph(rows * cols, std::move(edges));
}

/// Random geometric sensor network in the unit square. Every node proposes
/// edges to its k_max nearest points; an edge exists when either endpoint
/// proposed it. Weights are Euclidean distances.
inline GeneratedGraph sensor_graph(std::size_t n, std::size_t k_max, std::uint64_t seed) {
  if (n < 2) throw ValidationError("sensor_graph: n must be >= 2");
  if (k_max < 1 || n < k_max + 1) throw ValidationError("sensor_graph: requires 1 <= k_max and n >= k_max + 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, double>> pts(n);
  for (auto& p : pts) {
    p.first = unit(rng);
    p.second = unit(rng);
  }
  auto dist = [&](NodeId a, NodeId b) { return std::hypot(pts[a].first - pts[b].first, pts[a].second - pts[b].second); };

  std::vector<std::vector<std::uint8_t>> linked(n, std::vector<std::uint8_t>(n, 0));
  std::vector<NodeId> order(n);
  for (NodeId u = 0; u < n; ++u) {
    order.clear();
    for (NodeId v = 0; v < n; ++v) {
      if (v != u) order.push_back(v);
    }
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_max), order.end(),
                      [&](NodeId a, NodeId b) {
                        const double da = dist(u, a);
                        const double db = dist(u, b);
                        return da < db || (da == db && a < b);
                      });
    for (std::size_t i = 0; i < k_max; ++i) {
      const NodeId v = order[i];
      linked[std::min(u, v)][std::max(u, v)] = 1;
    }
  }
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (linked[u][v] != 0) edges.push_back({u, v, dist(u, v)});
    }
  }
  auto repairs = detail::connect_components(n, edges, dist);
  return {Graph(n, std::move(edges)), std::move(repairs)};
}

/// Community label of each node in community_graph(n, n_communities, ...).
inline std::vector<std::size_t> community_blocks(std::size_t n, std::size_t n_communities) {
  std::vector<std::size_t> block(n);
  const std::size_t base = n / n_communities;
  const std::size_t extra = n % n_communities;
  NodeId v = 0;
  for (std::size_t c = 0; c < n_communities; ++c) {
    const std::size_t sz = base + (c < extra ? 1 : 0);
    for (std::size_t i = 0; i < sz; ++i) block[v++] = c;
  }
  return block;
}

/// Planted-partition (stochastic block) graph with unit weights. Community
/// sizes differ by at most one; the first n % c communities get the extra node.
inline GeneratedGraph community_graph(std::size_t n, std::size_t n_communities, std::uint64_t seed,
                                      double p_in = 0.3, double p_out = 0.005) {
  if (n_communities < 1 || n < 2 * n_communities) {
    throw ValidationError("community_graph: requires n >= 2 * n_communities >= 2");
  }
  if (!(p_in >= 0.0 && p_in <= 1.0 && p_out >= 0.0 && p_out <= 1.0)) {
    throw ValidationError("community_graph: probabilities must lie in [0, 1]");
  }
  const auto block = community_blocks(n, n_communities);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges;
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      const double p = block[a] == block[b] ? p_in : p_out;
      if (unit(rng) < p) edges.push_back({a, b, 1.0});
    }
  }
  auto repairs = detail::connect_components(n, edges, [](NodeId, NodeId) { return 1.0; });
  return {Graph(n, std::move(edges)), std::move(repairs)};
}

/// Preferential attachment grown from a clique on the first m_attach nodes.
/// Each new node links to m_attach distinct existing nodes chosen with
/// probability proportional to degree.
inline Graph barabasi_albert(std::size_t n, std::size_t m_attach, std::uint64_t seed) {
  if (m_attach < 1 || n <= m_attach) throw ValidationError("barabasi_albert: requires n > m_attach >= 1");
  std::vector<Edge> edges;
  std::vector<NodeId> endpoints;  // node repeated once per incident edge
  for (NodeId u = 0; u < m_attach; ++u) {
    for (NodeId v = u + 1; v < m_attach; ++v) {
      edges.push_back({u, v, 1.0});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<NodeId> chosen;
  for (NodeId t = m_attach; t < n; ++t) {
    chosen.clear();
    if (endpoints.empty()) {
      // Only possible for m_attach == 1: the seed is a single isolated node.
      chosen.push_back(0);
    } else if (t == m_attach) {
      for (NodeId u = 0; u < m_attach; ++u) chosen.push_back(u);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
      while (chosen.size() < m_attach) {
        const NodeId cand = endpoints[pick(rng)];
        if (std::find(chosen.begin(), chosen.end(), cand) == chosen.end()) chosen.push_back(cand);
      }
    }
    for (auto u : chosen) {
      edges.push_back({u, t, 1.0});
      endpoints.push_back(u);
      endpoints.push_back(t);
    }
  }
  return Graph(n, std::move(edges));
}

inline GeneratedGraph generate(const GeneratorSpec& spec) {
  if (spec.n < 2 && spec.family != GraphFamily::grid) throw ValidationError("generator: n must be >= 2");
  switch (spec.family) {
    case GraphFamily::sensor: return sensor_graph(spec.n, spec.k_max, spec.seed);
    case GraphFamily::community:
      return community_graph(spec.n, spec.n_communities, spec.seed, spec.p_in, spec.p_out);
    case GraphFamily::barabasi_albert: return {barabasi_albert(spec.n, spec.m_attach, spec.seed), {}};
    case GraphFamily::path: return {path_graph(spec.n), {}};
    case GraphFamily::complete: return {complete_graph(spec.n), {}};
    case GraphFamily::grid: {
      if (spec.rows * spec.cols < 2) throw ValidationError("grid: rows * cols must be >= 2");
      return {grid_graph(spec.rows, spec.cols), {}};
    }
  }
  throw ValidationError("generator: unknown family");
}

}  // namespace gbn
