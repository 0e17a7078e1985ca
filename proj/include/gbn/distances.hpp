#pragma once

// Geodesic (shortest weighted path) distances, balls and annuli.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "gbn/error.hpp"
#include "gbn/graph.hpp"
#include "gbn/parallel.hpp"

namespace gbn {

/// Largest graph for which all-pairs distances are stored densely.
inline constexpr std::size_t kDenseDistanceLimit = 5000;

/// Gamma(u, v): length of the shortest path between u and v, where a path's
/// length is the sum of its edge weights.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(Eigen::MatrixXd gamma) : gamma_(std::move(gamma)) {}

  std::size_t size() const noexcept { return static_cast<std::size_t>(gamma_.rows()); }
  double operator()(NodeId u, NodeId v) const {
    return gamma_(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
  }
  const Eigen::MatrixXd& matrix() const noexcept { return gamma_; }
  double max() const { return gamma_.size() == 0 ? 0.0 : gamma_.maxCoeff(); }
  double mean() const { return gamma_.size() == 0 ? 0.0 : gamma_.mean(); }

 private:
  Eigen::MatrixXd gamma_;
};

/// Dijkstra from one source. Unreachable nodes are left at +inf.
inline std::vector<double> shortest_paths_from(const Graph& g, NodeId source) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.size(), inf);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist.at(source) = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& nb : g.neighbors(u)) {
      const double cand = d + nb.w;
      if (cand < dist[nb.node]) {
        dist[nb.node] = cand;
        heap.emplace(cand, nb.node);
      }
    }
  }
  return dist;
}

/// All-pairs geodesic distances, one Dijkstra per source (sources run in
/// parallel; each row is written by exactly one worker).
inline DistanceMatrix geodesic_distances(const Graph& g) {
  const std::size_t n = g.size();
  if (n > kDenseDistanceLimit) {
    throw ValidationError("geodesic_distances: n=" + std::to_string(n) +
                          " exceeds the dense limit; use shortest_paths_from per source");
  }
  Eigen::MatrixXd gamma(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_for(n, [&](std::size_t s) {
    const auto row = shortest_paths_from(g, s);
    for (std::size_t v = 0; v < n; ++v) {
      if (!std::isfinite(row[v])) {
        throw ValidationError("graph is disconnected: no path between node " + std::to_string(s) + " and node " +
                              std::to_string(v));
      }
      gamma(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(v)) = row[v];
    }
  });
  // Dijkstra from u and from v can round differently in the last bit.
  for (Eigen::Index i = 0; i < gamma.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < gamma.cols(); ++j) {
      const double d = std::min(gamma(i, j), gamma(j, i));
      gamma(i, j) = d;
      gamma(j, i) = d;
    }
  }
  return DistanceMatrix(std::move(gamma));
}

/// B(v, rho) = {u : Gamma(v, u) < rho}.
inline NodeSet open_ball(const DistanceMatrix& gamma, NodeId v, double rho) {
  if (!(rho > 0.0)) throw ValidationError("open_ball: radius must be positive");
  NodeSet out;
  for (NodeId u = 0; u < gamma.size(); ++u) {
    if (gamma(v, u) < rho) out.push_back(u);
  }
  return out;
}

/// B_theta(v, rho) = {u : rho - theta <= Gamma(v, u) < rho + theta}.
inline NodeSet annulus(const DistanceMatrix& gamma, NodeId v, double rho, double theta) {
  if (!(theta > 0.0)) throw ValidationError("annulus: width must be positive");
  NodeSet out;
  for (NodeId u = 0; u < gamma.size(); ++u) {
    const double d = gamma(v, u);
    if (rho - theta <= d && d < rho + theta) out.push_back(u);
  }
  return out;
}

}  // namespace gbn
