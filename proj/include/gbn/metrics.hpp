#pragma once

// Vertex-domain quality measures of sampling patterns: pair correlation,
// principal wavelength, the uniqueness constant K_S, geodesic Voronoi
// partitions and their spectral constant Lambda_P.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gbn/distances.hpp"
#include "gbn/error.hpp"
#include "gbn/graph.hpp"

namespace gbn {

struct PairCorrelation {
  std::vector<double> rho;     // strictly increasing radii where R is defined
  std::vector<double> values;  // R(rho), ensemble mean over patterns
  double theta = 0.0;          // annulus half-width
};

struct PairCorrelationOptions {
  std::optional<double> theta;  // defaults to the mean edge weight
  // When false, a node never counts itself inside its own annulus, so R
  // measures pairs of distinct sampling nodes.
  bool count_center = false;
};

namespace detail {

// Sorted distances from `center` to every sampling node.
inline std::vector<double> distances_to_support(const DistanceMatrix& gamma, NodeId center,
                                                std::span<const NodeId> support) {
  std::vector<double> d;
  d.reserve(support.size());
  for (auto s : support) d.push_back(gamma(center, s));
  std::sort(d.begin(), d.end());
  return d;
}

inline double count_in(const std::vector<double>& sorted, double lo, double hi) {
  const auto a = std::lower_bound(sorted.begin(), sorted.end(), lo);
  const auto b = std::lower_bound(sorted.begin(), sorted.end(), hi);
  return static_cast<double>(b - a);
}

}  // namespace detail

/// Ensemble pair correlation of binary patterns on the annulus grid
/// rho = theta, 1.5 theta, 2 theta, ... up to max(Gamma).
///
/// For each pattern, R_s(rho) is the mean number of sampling nodes in
/// B_theta(s_i, rho) around sampling nodes divided by the same mean taken
/// around every node. Radii where some pattern has an empty denominator are
/// undefined and left out of the result.
inline PairCorrelation pair_correlation(const Graph& g, const DistanceMatrix& gamma,
                                        std::span<const SamplingPattern> patterns, PairCorrelationOptions opts = {}) {
  if (patterns.empty()) throw ValidationError("pair_correlation: no patterns");
  const std::size_t n = gamma.size();
  if (g.size() != n) throw ValidationError("pair_correlation: graph and distance matrix sizes differ");
  const double theta = opts.theta.value_or(g.mean_edge_weight());
  if (!(theta > 0.0)) throw ValidationError("pair_correlation: annulus width must be positive");

  std::vector<double> grid;
  const double top = gamma.max();
  for (std::size_t j = 0;; ++j) {
    const double rho = theta + 0.5 * theta * static_cast<double>(j);
    if (rho > top) break;
    grid.push_back(rho);
  }
  std::vector<double> sum(grid.size(), 0.0);
  std::vector<bool> defined(grid.size(), true);

  for (const auto& s : patterns) {
    if (s.size() != n) throw ValidationError("pair_correlation: pattern size does not match graph size");
    if (s.count() == 0) throw ValidationError("pair_correlation: empty pattern");
    std::vector<double> around_samples(grid.size(), 0.0);
    std::vector<double> around_all(grid.size(), 0.0);
    for (NodeId v = 0; v < n; ++v) {
      const auto d = detail::distances_to_support(gamma, v, s.support());
      const bool is_sample = s.contains(v);
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double lo = grid[j] - theta;
        double c = detail::count_in(d, lo, grid[j] + theta);
        if (!opts.count_center && is_sample && lo <= 0.0) c -= 1.0;
        around_all[j] += c;
        if (is_sample) around_samples[j] += c;
      }
    }
    const double m = static_cast<double>(s.count());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double den = around_all[j] / static_cast<double>(n);
      if (den == 0.0) {
        defined[j] = false;
        continue;
      }
      sum[j] += (around_samples[j] / m) / den;
    }
  }

  PairCorrelation out;
  out.theta = theta;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!defined[j]) continue;
    out.rho.push_back(grid[j]);
    out.values.push_back(sum[j] / static_cast<double>(patterns.size()));
  }
  return out;
}

/// E[N(r)]: average over nodes v of |{u : Gamma(v, u) <= r}|.
inline double expected_ball_size(const DistanceMatrix& gamma, double r) {
  const auto& m = gamma.matrix();
  const auto inside = (m.array() <= r).count();
  return static_cast<double>(inside) / static_cast<double>(gamma.size());
}

/// Principal wavelength lambda_b at density d: the smallest distance value r
/// with E[N(r)] >= 1/d (closed balls).
inline double principal_wavelength(const DistanceMatrix& gamma, double d) {
  const std::size_t n = gamma.size();
  if (!(d > 0.0 && d <= 1.0)) throw ValidationError("principal_wavelength: density must lie in (0, 1]");
  if (1.0 / d > static_cast<double>(n) * (1.0 + 1e-12)) {
    throw ValidationError("principal_wavelength: 1/d exceeds the node count; wavelength undefined");
  }
  // E[N(r)] >= 1/d  <=>  #{(v,u) : Gamma(v,u) <= r} >= n/d.
  const double needed = static_cast<double>(n) / d;
  auto rank = static_cast<std::size_t>(std::ceil(needed - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n * n);
  std::vector<double> all(gamma.matrix().data(), gamma.matrix().data() + gamma.matrix().size());
  std::nth_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(rank - 1), all.end());
  return all[rank - 1];
}

namespace detail {

inline void require_proper_subset(std::size_t n, std::span<const NodeId> set, const char* who) {
  const auto s = make_node_set(n, set);
  if (s.empty()) throw ValidationError(std::string(who) + ": sampling set is empty");
  if (s.size() == n) throw ValidationError(std::string(who) + ": sampling set covers every node");
}

}  // namespace detail

/// K_S = min over v outside S of w_S(v).
inline double uniqueness_constant_ks(const Graph& g, std::span<const NodeId> set) {
  detail::require_proper_subset(g.size(), set, "uniqueness_constant_ks");
  const auto w = boundary_weights(g, set);
  const auto rest = complement(g.size(), set);
  double best = std::numeric_limits<double>::infinity();
  for (auto v : rest) best = std::min(best, w[v]);
  return best;
}

/// Both sides of K_S^2 + sum_{v in S^c \ v'} w_S(v)^2 = sum_{v in S^c} w_S(v)^2,
/// where v' is the lowest-index node attaining K_S.
struct KsSquaredSums {
  double ks = 0.0;
  NodeId minimizer = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

inline KsSquaredSums ks_squared_sums(const Graph& g, std::span<const NodeId> set) {
  detail::require_proper_subset(g.size(), set, "ks_squared_sums");
  const auto w = boundary_weights(g, set);
  const auto rest = complement(g.size(), set);
  KsSquaredSums out;
  out.ks = std::numeric_limits<double>::infinity();
  for (auto v : rest) {
    if (w[v] < out.ks) {
      out.ks = w[v];
      out.minimizer = v;
    }
  }
  out.lhs = out.ks * out.ks;
  for (auto v : rest) {
    out.rhs += w[v] * w[v];
    if (v != out.minimizer) out.lhs += w[v] * w[v];
  }
  return out;
}

/// Disjoint cover of the nodes; cells[j] contains seeds[j].
struct Partition {
  std::vector<NodeSet> cells;
  std::vector<NodeId> seeds;
  double radius = 0.0;  // max distance from a node to its cell's seed
};

/// Geodesic Voronoi cells around the sampling nodes. A node equidistant to
/// several seeds joins whichever of those cells currently has the smallest
/// volume (lowest seed on equal volume); tied nodes are placed in index order
/// after every uniquely-assigned node.
inline Partition partition_from_pattern(const Graph& g, const DistanceMatrix& gamma, const SamplingPattern& s) {
  if (s.count() == 0) throw ValidationError("partition_from_pattern: empty sampling pattern");
  const std::size_t n = g.size();
  if (gamma.size() != n || s.size() != n) throw ValidationError("partition_from_pattern: size mismatch");
  const auto& seeds = s.support();
  Partition p;
  p.seeds = seeds;
  p.cells.assign(seeds.size(), {});
  std::vector<double> vol(seeds.size(), 0.0);
  std::vector<std::size_t> owner(n, seeds.size());
  std::vector<std::vector<std::size_t>> tied(n);

  for (NodeId v = 0; v < n; ++v) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < seeds.size(); ++j) best = std::min(best, gamma(v, seeds[j]));
    for (std::size_t j = 0; j < seeds.size(); ++j) {
      if (gamma(v, seeds[j]) == best) tied[v].push_back(j);
    }
    if (tied[v].size() == 1) {
      owner[v] = tied[v].front();
      vol[owner[v]] += g.degree(v);
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (tied[v].size() <= 1) continue;
    std::size_t pick = tied[v].front();
    for (auto j : tied[v]) {
      if (vol[j] < vol[pick]) pick = j;
    }
    owner[v] = pick;
    vol[pick] += g.degree(v);
  }
  for (NodeId v = 0; v < n; ++v) {
    p.cells[owner[v]].push_back(v);
    p.radius = std::max(p.radius, gamma(v, seeds[owner[v]]));
  }
  return p;
}

struct PartitionConstant {
  double value = 0.0;             // Lambda_P = min over cells of mu_1 of the cell
  std::vector<double> per_cell;   // first nonzero eigenvalue, 0 when undefined
  std::vector<std::string> warnings;
};

/// Lambda_P: the smallest first-nonzero Laplacian eigenvalue over the
/// induced cell subgraphs. A singleton or disconnected cell has no positive
/// first eigenvalue; it contributes 0 and a warning.
inline PartitionConstant lambda_partition(const Graph& g, const Partition& p) {
  PartitionConstant out;
  out.value = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < p.cells.size(); ++j) {
    const auto sub = induced_subgraph(g, p.cells[j]);
    double mu1 = 0.0;
    if (sub.size() == 1) {
      out.warnings.push_back("cell " + std::to_string(j) + " is a single node and has no nonzero eigenvalue");
    } else if (!sub.connected) {
      out.warnings.push_back("cell " + std::to_string(j) + " induces a disconnected subgraph");
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sub.laplacian(), Eigen::EigenvaluesOnly);
      mu1 = solver.eigenvalues()(1);
    }
    out.per_cell.push_back(mu1);
    out.value = std::min(out.value, mu1);
  }
  if (p.cells.empty()) out.value = 0.0;
  return out;
}

}  // namespace gbn
