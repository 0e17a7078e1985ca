#pragma once

// Undirected weighted simple graphs, sampling patterns and the vertex-domain
// quantities built directly from the weights (Laplacian, volumes, cuts).
//
// Weight convention: an edge weight is a *length*. Geodesic distances sum
// weights along a path, so a heavier edge puts its endpoints farther apart.
// The Laplacian is still L = D - W with those same weights.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gbn/error.hpp"

namespace gbn {

using NodeId = std::size_t;
using NodeSet = std::vector<NodeId>;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double w = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  NodeId node = 0;
  double w = 0.0;
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), NodeId{0});
  }

  NodeId find(NodeId x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(NodeId a, NodeId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<NodeId> parent_;
  std::vector<std::uint32_t> rank_;
};

// Component label per node, labels numbered by smallest member.
inline std::vector<std::size_t> component_labels(std::size_t n, std::span<const Edge> edges) {
  DisjointSets sets(n);
  for (const auto& e : edges) sets.unite(e.u, e.v);
  std::vector<std::size_t> label(n, n);
  std::vector<std::size_t> root_label(n, n);
  std::size_t next = 0;
  for (NodeId v = 0; v < n; ++v) {
    const NodeId r = sets.find(v);
    if (root_label[r] == n) root_label[r] = next++;
    label[v] = root_label[r];
  }
  return label;
}

inline std::size_t component_count(std::size_t n, std::span<const Edge> edges) {
  const auto labels = component_labels(n, edges);
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

// Checks simplicity and weights; returns edges normalized to u < v, sorted.
inline std::vector<Edge> normalize_edges(std::size_t n, std::vector<Edge> edges) {
  for (auto& e : edges) {
    if (e.u >= n || e.v >= n) {
      std::ostringstream msg;
      msg << "edge (" << e.u << "," << e.v << ") references a node outside 0.." << (n == 0 ? 0 : n - 1);
      throw ValidationError(msg.str());
    }
    if (e.u == e.v) {
      throw ValidationError("self-loop at node " + std::to_string(e.u));
    }
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      std::ostringstream msg;
      msg << "edge (" << e.u << "," << e.v << ") has nonpositive or non-finite weight " << e.w;
      throw ValidationError(msg.str());
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v) {
      throw ValidationError("duplicate edge (" + std::to_string(edges[i].u) + "," +
                            std::to_string(edges[i].v) + ")");
    }
  }
  return edges;
}

inline Eigen::MatrixXd laplacian_of(std::size_t n, std::span<const Edge> edges) {
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& e : edges) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    lap(u, v) -= e.w;
    lap(v, u) -= e.w;
    lap(u, u) += e.w;
    lap(v, v) += e.w;
  }
  return lap;
}

}  // namespace detail

/// Undirected, weighted, simple, connected graph on nodes 0..n-1.
///
/// Construction validates every invariant and throws ValidationError when a
/// self-loop, duplicate pair, nonpositive weight or disconnection is found.
class Graph {
 public:
  Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(detail::normalize_edges(n, std::move(edges))) {
    if (n_ < 1) throw ValidationError("graph must have at least one node");
    const auto labels = detail::component_labels(n_, edges_);
    for (NodeId v = 0; v < n_; ++v) {
      if (labels[v] != 0) {
        throw ValidationError("graph is disconnected: no path between node 0 and node " + std::to_string(v));
      }
    }
    adjacency_.assign(n_, {});
    degree_.assign(n_, 0.0);
    for (const auto& e : edges_) {
      adjacency_[e.u].push_back({e.v, e.w});
      adjacency_[e.v].push_back({e.u, e.w});
      degree_[e.u] += e.w;
      degree_[e.v] += e.w;
    }
    for (auto& list : adjacency_) {
      std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    }
  }

  std::size_t size() const noexcept { return n_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Neighbor> neighbors(NodeId v) const { return adjacency_.at(v); }
  double degree(NodeId v) const { return degree_.at(v); }

  /// W(u, v); zero when the pair is not an edge.
  double weight(NodeId u, NodeId v) const {
    const auto& list = adjacency_.at(u);
    auto it = std::lower_bound(list.begin(), list.end(), v,
                               [](const Neighbor& a, NodeId key) { return a.node < key; });
    return (it != list.end() && it->node == v) ? it->w : 0.0;
  }

  Eigen::MatrixXd adjacency_matrix() const {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (const auto& e : edges_) {
      w(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = e.w;
      w(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = e.w;
    }
    return w;
  }

  double mean_edge_weight() const {
    if (edges_.empty()) return 0.0;
    double total = 0.0;
    for (const auto& e : edges_) total += e.w;
    return total / static_cast<double>(edges_.size());
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<double> degree_;
};

/// Binary signal s over the nodes together with its sorted support.
class SamplingPattern {
 public:
  SamplingPattern() = default;

  SamplingPattern(std::size_t n, NodeSet support) : n_(n), support_(std::move(support)) {
    std::sort(support_.begin(), support_.end());
    for (std::size_t i = 0; i < support_.size(); ++i) {
      if (support_[i] >= n_) {
        throw ValidationError("sampling node " + std::to_string(support_[i]) + " out of range for n=" +
                              std::to_string(n_));
      }
      if (i > 0 && support_[i] == support_[i - 1]) {
        throw ValidationError("duplicate sampling node " + std::to_string(support_[i]));
      }
    }
    mask_.assign(n_, 0);
    for (auto v : support_) mask_[v] = 1;
  }

  static SamplingPattern from_indicator(std::span<const std::uint8_t> s) {
    NodeSet support;
    for (std::size_t v = 0; v < s.size(); ++v) {
      if (s[v] != 0) support.push_back(v);
    }
    return SamplingPattern(s.size(), std::move(support));
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t count() const noexcept { return support_.size(); }
  double density() const noexcept { return n_ == 0 ? 0.0 : static_cast<double>(count()) / static_cast<double>(n_); }
  const NodeSet& support() const noexcept { return support_; }
  bool contains(NodeId v) const { return mask_.at(v) != 0; }
  std::span<const std::uint8_t> mask() const noexcept { return mask_; }

  Eigen::VectorXd indicator() const {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
    for (auto v : support_) s(static_cast<Eigen::Index>(v)) = 1.0;
    return s;
  }

  NodeSet complement() const {
    NodeSet out;
    out.reserve(n_ - count());
    for (NodeId v = 0; v < n_; ++v) {
      if (mask_[v] == 0) out.push_back(v);
    }
    return out;
  }

  friend bool operator==(const SamplingPattern& a, const SamplingPattern& b) {
    return a.n_ == b.n_ && a.support_ == b.support_;
  }

 private:
  std::size_t n_ = 0;
  NodeSet support_;
  std::vector<std::uint8_t> mask_;
};

/// Sorted, duplicate-free copy of `nodes`; throws when an index is >= n.
inline NodeSet make_node_set(std::size_t n, std::span<const NodeId> nodes) {
  NodeSet out(nodes.begin(), nodes.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (!out.empty() && out.back() >= n) {
    throw ValidationError("node " + std::to_string(out.back()) + " out of range for n=" + std::to_string(n));
  }
  return out;
}

inline NodeSet complement(std::size_t n, std::span<const NodeId> nodes) {
  std::vector<std::uint8_t> in(n, 0);
  for (auto v : nodes) in.at(v) = 1;
  NodeSet out;
  for (NodeId v = 0; v < n; ++v) {
    if (in[v] == 0) out.push_back(v);
  }
  return out;
}

/// L = D - W.
inline Eigen::MatrixXd laplacian(const Graph& g) { return detail::laplacian_of(g.size(), g.edges()); }

/// Sum of degrees over `subset`, or over all nodes when omitted.
inline double volume(const Graph& g, std::optional<std::span<const NodeId>> subset = std::nullopt) {
  double total = 0.0;
  if (!subset) {
    for (NodeId v = 0; v < g.size(); ++v) total += g.degree(v);
    return total;
  }
  for (auto v : *subset) {
    if (v >= g.size()) throw ValidationError("volume: node " + std::to_string(v) + " out of range");
    total += g.degree(v);
  }
  return total;
}

/// w_S(v) = sum of W(s, v) over s in S.
inline double boundary_weight(const Graph& g, std::span<const NodeId> set, NodeId v) {
  if (v >= g.size()) throw ValidationError("boundary_weight: node " + std::to_string(v) + " out of range");
  std::vector<std::uint8_t> in(g.size(), 0);
  for (auto s : set) in.at(s) = 1;
  double total = 0.0;
  for (const auto& nb : g.neighbors(v)) {
    if (in[nb.node] != 0) total += nb.w;
  }
  return total;
}

/// w_S(v) for every node v at once.
inline std::vector<double> boundary_weights(const Graph& g, std::span<const NodeId> set) {
  std::vector<double> out(g.size(), 0.0);
  for (auto s : set) {
    if (s >= g.size()) throw ValidationError("boundary_weights: node " + std::to_string(s) + " out of range");
    for (const auto& nb : g.neighbors(s)) out[nb.node] += nb.w;
  }
  return out;
}

/// Total weight of edges crossing between S and its complement.
inline double cut_weight(const Graph& g, std::span<const NodeId> set) {
  std::vector<std::uint8_t> in(g.size(), 0);
  for (auto s : set) in.at(s) = 1;
  double total = 0.0;
  for (const auto& e : g.edges()) {
    if (in[e.u] != in[e.v]) total += e.w;
  }
  return total;
}

/// Subgraph induced by a node set. Connectivity is reported, not required.
struct InducedSubgraph {
  NodeSet nodes;            // original ids, ascending; local id i <-> nodes[i]
  std::vector<Edge> edges;  // local ids
  bool connected = false;

  std::size_t size() const noexcept { return nodes.size(); }
  Eigen::MatrixXd laplacian() const { return detail::laplacian_of(nodes.size(), edges); }
};

inline InducedSubgraph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  if (nodes.empty()) throw ValidationError("induced_subgraph: empty node set");
  InducedSubgraph sub;
  sub.nodes = make_node_set(g.size(), nodes);
  std::vector<std::size_t> local(g.size(), g.size());
  for (std::size_t i = 0; i < sub.nodes.size(); ++i) local[sub.nodes[i]] = i;
  for (const auto& e : g.edges()) {
    if (local[e.u] != g.size() && local[e.v] != g.size()) {
      sub.edges.push_back({local[e.u], local[e.v], e.w});
    }
  }
  sub.connected = detail::component_count(sub.nodes.size(), sub.edges) == 1;
  return sub;
}

}  // namespace gbn
