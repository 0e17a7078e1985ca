#pragma once

// Sampling-set constructors: uniform random (white noise), void-and-cluster
// on graphs, and two greedy spectral baselines.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gbn/distances.hpp"
#include "gbn/error.hpp"
#include "gbn/graph.hpp"
#include "gbn/metrics.hpp"
#include "gbn/spectral.hpp"

namespace gbn {

/// Uniformly random m-subset of the n nodes.
inline SamplingPattern white_noise(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m > n) throw ValidationError("white_noise: m=" + std::to_string(m) + " exceeds n=" + std::to_string(n));
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  NodeSet picked;
  picked.reserve(m);
  std::mt19937_64 rng(seed);
  std::sample(nodes.begin(), nodes.end(), std::back_inserter(picked), static_cast<std::ptrdiff_t>(m), rng);
  return SamplingPattern(n, std::move(picked));
}

// ---------------------------------------------------------------------------
// Void and cluster

struct VacParams {
  std::size_t m = 0;
  std::optional<double> sigma;           // kernel bandwidth; default lambda_b^2 / ln 10
  std::optional<double> tau;             // offset pushing empty-node scores negative; default 2n
  std::optional<std::size_t> num_iter;   // default n
  std::uint64_t seed = 0;
  std::optional<NodeSet> initial;        // starting support; random m-subset when absent
};

struct VacResult {
  SamplingPattern pattern;
  std::size_t iterations = 0;  // swaps performed
  bool stopped_early = false;  // swap pair repeated before num_iter
  double sigma = 0.0;
  double tau = 0.0;
};

/// Called with the iteration count (0 = initial random pattern) and the
/// current pattern.
using VacObserver = std::function<void(std::size_t, const SamplingPattern&)>;

/// sigma = lambda_b^2 / ln 10, so the kernel falls to 0.1 at one principal
/// wavelength. Falls back to mean(Gamma)^2 / ln 10 when lambda_b is undefined
/// or zero.
inline double default_vac_sigma(const DistanceMatrix& gamma, std::size_t m) {
  const double ln10 = std::log(10.0);
  const std::size_t n = gamma.size();
  if (m >= 1 && m < n) {
    try {
      const double lb = principal_wavelength(gamma, static_cast<double>(m) / static_cast<double>(n));
      if (lb > 0.0) return lb * lb / ln10;
    } catch (const ValidationError&) {
    }
  }
  const double mean = gamma.mean();
  return mean > 0.0 ? mean * mean / ln10 : 1.0;
}

/// K(i, j) = exp(-Gamma(i, j)^2 / sigma).
inline Eigen::MatrixXd vac_kernel(const DistanceMatrix& gamma, double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("vac: sigma must be positive");
  return (-gamma.matrix().array().square() / sigma).exp().matrix();
}

namespace detail {

// Lowest index whose value is within `tol` of the extreme.
inline std::size_t tolerant_arg_extreme(const std::vector<double>& values, const std::vector<std::uint8_t>& eligible,
                                        std::uint8_t want, bool maximize, double tol) {
  double best = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (eligible[i] != want) continue;
    best = maximize ? std::max(best, values[i]) : std::min(best, values[i]);
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (eligible[i] != want) continue;
    if (maximize ? values[i] >= best - tol : values[i] <= best + tol) return i;
  }
  return values.size();
}

}  // namespace detail

/// Void and cluster on a precomputed kernel K.
///
/// Each iteration scores sampling nodes by their kernel mass toward the
/// other sampling nodes (self term included) and empty nodes by their mass
/// toward the sampling nodes minus tau. The 1 at the highest score (tightest
/// cluster) moves to the lowest score (largest void). The loop stops after
/// num_iter swaps, or right after a swap that exactly undoes the previous one.
/// Ties go to the lowest node index.
inline VacResult vac(const Eigen::MatrixXd& kernel, VacParams params, double sigma, const VacObserver& observer = {},
                     std::size_t observe_every = 0) {
  const auto n = static_cast<std::size_t>(kernel.rows());
  if (params.m == 0) throw ValidationError("vac: m must be >= 1");
  if (params.m > n) throw ValidationError("vac: m exceeds the number of nodes");
  const double tau = params.tau.value_or(2.0 * static_cast<double>(n));
  if (!(tau > static_cast<double>(n))) throw ValidationError("vac: tau must exceed n");
  const std::size_t num_iter = params.num_iter.value_or(n);
  if (num_iter < 1) throw ValidationError("vac: num_iter must be >= 1");

  VacResult result;
  result.sigma = sigma;
  result.tau = tau;

  SamplingPattern initial =
      params.initial ? SamplingPattern(n, *params.initial) : white_noise(n, params.m, params.seed);
  if (initial.count() != params.m) throw ValidationError("vac: initial support must have exactly m nodes");
  std::vector<std::uint8_t> mask(initial.mask().begin(), initial.mask().end());
  if (observer) observer(0, initial);
  if (params.m == n) {
    result.pattern = std::move(initial);
    return result;
  }

  // mass(i) = sum over sampling nodes j of K(i, j).
  std::vector<double> mass(n, 0.0);
  auto recompute = [&] {
    std::fill(mass.begin(), mass.end(), 0.0);
    for (NodeId j = 0; j < n; ++j) {
      if (mask[j] == 0) continue;
      for (NodeId i = 0; i < n; ++i) {
        mass[i] += kernel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  };
  recompute();

  constexpr double kTieTol = 1e-12;
  constexpr std::size_t kRefresh = 256;
  std::size_t last_added = n;
  std::size_t last_removed = n;
  std::size_t r = 0;
  auto snapshot = [&] { return SamplingPattern::from_indicator(mask); };

  for (r = 1; r <= num_iter; ++r) {
    // Empty-node scores are mass - tau; the shift is common to all of them,
    // so the argmin is taken on mass directly.
    const std::size_t cluster = detail::tolerant_arg_extreme(mass, mask, 1, true, kTieTol);
    const std::size_t gap = detail::tolerant_arg_extreme(mass, mask, 0, false, kTieTol);
    mask[cluster] = 0;
    mask[gap] = 1;
    for (NodeId i = 0; i < n; ++i) {
      mass[i] += kernel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(gap)) -
                 kernel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(cluster));
    }
    if (r % kRefresh == 0) recompute();
    result.iterations = r;
    if (observer && observe_every > 0 && r % observe_every == 0) observer(r, snapshot());
    if (last_added == cluster && last_removed == gap) {
      result.stopped_early = true;
      break;
    }
    last_added = gap;
    last_removed = cluster;
  }
  result.pattern = snapshot();
  if (observer && (observe_every == 0 || result.iterations % observe_every != 0)) {
    observer(result.iterations, result.pattern);
  }
  return result;
}

/// Void and cluster driven by geodesic distances; resolves default sigma.
inline VacResult vac(const DistanceMatrix& gamma, VacParams params, const VacObserver& observer = {},
                     std::size_t observe_every = 0) {
  if (params.m == 0) throw ValidationError("vac: m must be >= 1");
  const double sigma = params.sigma.value_or(default_vac_sigma(gamma, params.m));
  if (!(sigma > 0.0)) throw ValidationError("vac: sigma must be positive");
  return vac(vac_kernel(gamma, sigma), params, sigma, observer, observe_every);
}

// ---------------------------------------------------------------------------
// Greedy baselines. Both are prefix-consistent: the first m picks do not
// depend on how many more would follow, so the *_order functions return the
// full pick sequence and the pattern functions take a prefix.

namespace detail {

inline std::size_t argmax_lowest(const std::vector<double>& score, double rel_tol) {
  double best = -std::numeric_limits<double>::infinity();
  for (double s : score) best = std::max(best, s);
  const double tol = rel_tol * std::max(1.0, std::abs(best));
  for (std::size_t i = 0; i < score.size(); ++i) {
    if (score[i] >= best - tol) return i;
  }
  return score.size();
}

inline double smallest_eigenvalue(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

}  // namespace detail

/// Smallest singular value of U_k restricted to `rows`, counting only the
/// min(|rows|, k) singular values the row-sampled matrix has.
inline double restricted_sigma_min(const SpectralBasis& basis, std::size_t k, std::span<const NodeId> rows) {
  if (rows.empty()) return 0.0;
  const Eigen::MatrixXd r = select_rows(basis.U.leftCols(static_cast<Eigen::Index>(k)), rows);
  const Eigen::MatrixXd gram = rows.size() <= k ? Eigen::MatrixXd(r * r.transpose()) : Eigen::MatrixXd(r.transpose() * r);
  return std::sqrt(std::max(0.0, detail::smallest_eigenvalue(gram)));
}

/// Greedy worst-case design: each pick maximizes the smallest singular value
/// of the row-sampled U_k (while fewer than k rows are chosen, the smallest
/// of the |S| singular values).
inline std::vector<NodeId> greedy_sigma_min_order(const SpectralBasis& basis, std::size_t k, std::size_t m) {
  const std::size_t n = basis.size();
  if (k < 1 || k > n) throw ValidationError("greedy_sigma_min: bandwidth must satisfy 1 <= k <= n");
  if (m > n) throw ValidationError("greedy_sigma_min: m exceeds n");
  const Eigen::MatrixXd uk = basis.U.leftCols(static_cast<Eigen::Index>(k));
  std::vector<NodeId> order;
  std::vector<std::uint8_t> taken(n, 0);
  std::vector<double> score(n);
  std::vector<NodeId> candidates;

  for (std::size_t t = 0; t < m; ++t) {
    candidates.clear();
    for (NodeId v = 0; v < n; ++v) {
      if (taken[v] == 0) candidates.push_back(v);
    }
    score.assign(candidates.size(), 0.0);
    const Eigen::MatrixXd rs = select_rows(uk, order);
    const auto ti = static_cast<Eigen::Index>(t);
    if (t + 1 <= k) {
      // Gram of the (t+1) x k row block: [[R R^T, R u], [u^T R^T, u^T u]].
      const Eigen::MatrixXd inner = rs * rs.transpose();
      Eigen::MatrixXd gram(ti + 1, ti + 1);
      gram.topLeftCorner(ti, ti) = inner;
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        const Eigen::RowVectorXd u = uk.row(static_cast<Eigen::Index>(candidates[c]));
        const Eigen::VectorXd cross = rs * u.transpose();
        gram.block(0, ti, ti, 1) = cross;
        gram.block(ti, 0, 1, ti) = cross.transpose();
        gram(ti, ti) = u.squaredNorm();
        score[c] = std::max(0.0, detail::smallest_eigenvalue(gram));
      }
    } else {
      const Eigen::MatrixXd base = rs.transpose() * rs;
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        const Eigen::RowVectorXd u = uk.row(static_cast<Eigen::Index>(candidates[c]));
        score[c] = std::max(0.0, detail::smallest_eigenvalue(base + u.transpose() * u));
      }
    }
    const NodeId pick = candidates[detail::argmax_lowest(score, 1e-12)];
    taken[pick] = 1;
    order.push_back(pick);
  }
  return order;
}

inline SamplingPattern greedy_sigma_min(const SpectralBasis& basis, std::size_t k, std::size_t m) {
  if (m < 1) throw ValidationError("greedy_sigma_min: m must be >= 1");
  return SamplingPattern(basis.size(), greedy_sigma_min_order(basis, k, m));
}

/// Greedy spectral-proxy design: each pick is the unsampled node with the
/// largest |psi|, psi the eigenvector of the smallest eigenvalue of
/// (L^{2q}) restricted to the unsampled nodes.
inline std::vector<NodeId> greedy_spectral_proxy_order(const Eigen::MatrixXd& L, std::size_t m, unsigned q) {
  const auto n = static_cast<std::size_t>(L.rows());
  if (q < 1) throw ValidationError("greedy_spectral_proxy: order q must be >= 1");
  if (m > n) throw ValidationError("greedy_spectral_proxy: m=" + std::to_string(m) + " exceeds n=" + std::to_string(n));
  const Eigen::MatrixXd power = matrix_power(L, 2 * q);
  std::vector<NodeId> order;
  std::vector<std::uint8_t> taken(n, 0);
  for (std::size_t t = 0; t < m; ++t) {
    NodeSet rest;
    for (NodeId v = 0; v < n; ++v) {
      if (taken[v] == 0) rest.push_back(v);
    }
    NodeId pick = rest.front();
    if (rest.size() > 1) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(principal_submatrix(power, rest));
      if (solver.info() != Eigen::Success) throw NumericError("greedy_spectral_proxy: eigensolver failed");
      const Eigen::VectorXd psi = solver.eigenvectors().col(0);
      std::vector<double> mag(rest.size());
      for (std::size_t i = 0; i < rest.size(); ++i) mag[i] = std::abs(psi(static_cast<Eigen::Index>(i)));
      pick = rest[detail::argmax_lowest(mag, 1e-9)];
    }
    taken[pick] = 1;
    order.push_back(pick);
  }
  return order;
}

inline SamplingPattern greedy_spectral_proxy(const Eigen::MatrixXd& L, std::size_t m, unsigned q) {
  return SamplingPattern(static_cast<std::size_t>(L.rows()), greedy_spectral_proxy_order(L, m, q));
}

}  // namespace gbn
