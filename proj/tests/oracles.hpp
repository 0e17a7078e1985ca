#pragma once

// Independent reference computations used by the tests. They deliberately
// avoid the library's own code paths.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "gbn/graph.hpp"

namespace oracle {

using gbn::Graph;
using gbn::NodeId;

// Bellman-Ford from every source over the edge list. Summing one path from
// either end can round differently, so like the library the distance between
// u and v is the smaller of the two directed results.
inline Eigen::MatrixXd bellman_ford_all_pairs(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, inf);
  for (Eigen::Index s = 0; s < n; ++s) {
    d(s, s) = 0.0;
    for (Eigen::Index round = 0; round < n; ++round) {
      bool changed = false;
      for (const auto& e : g.edges()) {
        const auto u = static_cast<Eigen::Index>(e.u), v = static_cast<Eigen::Index>(e.v);
        if (d(s, u) + e.w < d(s, v)) { d(s, v) = d(s, u) + e.w; changed = true; }
        if (d(s, v) + e.w < d(s, u)) { d(s, u) = d(s, v) + e.w; changed = true; }
      }
      if (!changed) break;
    }
  }
  return d.cwiseMin(d.transpose());
}

// Laplacian assembled from W(u, v) queries, not from the edge list.
inline Eigen::MatrixXd laplacian_from_weights(const Graph& g) {
  const std::size_t n = g.size();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u == v) continue;
      const double w = g.weight(u, v);
      L(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = -w;
      L(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u)) += w;
    }
  }
  return L;
}

inline Eigen::MatrixXd columns(const Eigen::MatrixXd& m, const std::vector<NodeId>& idx) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(static_cast<Eigen::Index>(idx[j]));
  return out;
}

inline Eigen::MatrixXd rows(const Eigen::MatrixXd& m, const std::vector<NodeId>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t j = 0; j < idx.size(); ++j) out.row(static_cast<Eigen::Index>(j)) = m.row(static_cast<Eigen::Index>(idx[j]));
  return out;
}

inline double sigma_min(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  return s.size() == 0 ? 0.0 : s(s.size() - 1);
}

// min over unit phi supported on `support` of ||L^q phi||, found by inverse
// iteration on G = (L^q)_{:,S}^T (L^q)_{:,S} followed by a Rayleigh quotient.
inline double rayleigh_min(const Eigen::MatrixXd& L, const std::vector<NodeId>& support, unsigned q) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(L.rows(), L.cols());
  for (unsigned i = 0; i < q; ++i) P = P * L;
  const Eigen::MatrixXd A = columns(P, support);
  const Eigen::MatrixXd G = A.transpose() * A;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(G.rows());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += 0.1 * static_cast<double>(i % 7);
  x.normalize();
  for (int it = 0; it < 2000; ++it) {
    Eigen::VectorXd y = lu.solve(x);
    y.normalize();
    if ((y - x).norm() < 1e-15 || (y + x).norm() < 1e-15) {
      x = y;
      break;
    }
    x = y;
  }
  return std::sqrt(std::max(0.0, x.dot(G * x)));
}

// Least-squares reconstruction by normal equations.
inline Eigen::VectorXd normal_equations(const Eigen::MatrixXd& uk, const std::vector<NodeId>& set,
                                        const Eigen::VectorXd& y) {
  const Eigen::MatrixXd A = rows(uk, set);
  const Eigen::VectorXd c = (A.transpose() * A).ldlt().solve(A.transpose() * y);
  return uk * c;
}

// Smallest nonzero eigenvalue of the Laplacian of the cell, via the
// singular values of the dense cell Laplacian (PSD, so they coincide).
inline double cell_mu1(const Graph& g, const std::vector<NodeId>& cell) {
  const auto k = static_cast<Eigen::Index>(cell.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (i == j) continue;
      const double w = g.weight(cell[static_cast<std::size_t>(i)], cell[static_cast<std::size_t>(j)]);
      L(i, j) = -w;
      L(i, i) += w;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L);
  const auto& s = svd.singularValues();  // descending
  return k < 2 ? 0.0 : s(k - 2);
}

// Void and cluster on a kernel, started from `initial`: straight transcription
// of the loop with full recomputation of the scores every iteration.
inline std::vector<NodeId> vac_reference(const Eigen::MatrixXd& K, std::vector<NodeId> initial, double tau,
                                         std::size_t num_iter) {
  const auto n = static_cast<std::size_t>(K.rows());
  std::vector<int> s(n, 0);
  for (auto v : initial) s[v] = 1;
  std::size_t prev_a = n, prev_b = n;
  for (std::size_t r = 0; r < num_iter; ++r) {
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (s[j]) c[i] += K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
      if (!s[i]) c[i] -= tau;
    }
    std::size_t a = n, b = n;  // a: empty node with minimal c, b: sample with maximal c
    for (std::size_t i = 0; i < n; ++i) {
      if (!s[i] && (a == n || c[i] < c[a] - 1e-12)) a = i;
      if (s[i] && (b == n || c[i] > c[b] + 1e-12)) b = i;
    }
    s[b] = 0;
    s[a] = 1;
    if (a == prev_b && b == prev_a) break;
    prev_a = a;
    prev_b = b;
  }
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i]) out.push_back(i);
  }
  return out;
}

inline Graph random_connected_graph(std::size_t n, double p, std::uint64_t seed, bool unit = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0), weight(0.2, 2.0);
  std::vector<gbn::Edge> edges;
  // Random spanning tree first, then extra edges.
  for (NodeId v = 1; v < n; ++v) {
    std::uniform_int_distribution<NodeId> parent(0, v - 1);
    edges.push_back({parent(rng), v, unit ? 1.0 : weight(rng)});
  }
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const bool tree = std::any_of(edges.begin(), edges.end(), [&](const gbn::Edge& e) {
        return (e.u == u && e.v == v) || (e.u == v && e.v == u);
      });
      if (!tree && coin(rng) < p) edges.push_back({u, v, unit ? 1.0 : weight(rng)});
    }
  }
  return Graph(n, std::move(edges));
}

}  // namespace oracle
