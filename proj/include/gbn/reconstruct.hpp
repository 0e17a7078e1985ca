#pragma once

// Sampling, additive noise and least-squares recovery of bandlimited signals.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>

#include "gbn/error.hpp"
#include "gbn/graph.hpp"
#include "gbn/spectral.hpp"

namespace gbn {

/// Relative cutoff below which singular values of M U_k count as zero.
inline constexpr double kRankTolerance = 1e-10;

struct ReconstructionReport {
  double mse = 0.0;             // ||x_rec - x||^2 / n (when the truth is known)
  double sse = 0.0;             // ||x_rec - x||^2
  double relative_error = 0.0;  // ||x_rec - x|| / ||x||
  double sigma_min = 0.0;       // k-th singular value of M U_k (0 when |S| < k)
  double sigma_max = 0.0;
  bool rank_deficient = false;  // sigma_min < kRankTolerance * sigma_max
};

struct Reconstruction {
  Eigen::VectorXd signal;
  ReconstructionReport report;
};

/// x(S): the entries of x on S, ascending node order.
inline Eigen::VectorXd sample_signal(const Eigen::VectorXd& x, std::span<const NodeId> set) {
  const NodeSet nodes = make_node_set(static_cast<std::size_t>(x.size()), set);
  Eigen::VectorXd y(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) y(static_cast<Eigen::Index>(i)) = x(static_cast<Eigen::Index>(nodes[i]));
  return y;
}

/// Adds i.i.d. N(0, s^2) noise with s^2 = (||y||^2 / m) 10^(-snr_db / 10).
/// An infinite SNR returns y unchanged.
inline Eigen::VectorXd add_noise(const Eigen::VectorXd& y, double snr_db, std::uint64_t seed) {
  if (y.size() == 0 || y.squaredNorm() == 0.0) throw ValidationError("add_noise: SNR is undefined for a zero signal");
  if (std::isinf(snr_db) && snr_db > 0.0) return y;
  if (std::isnan(snr_db)) throw ValidationError("add_noise: SNR is NaN");
  const double power = y.squaredNorm() / static_cast<double>(y.size());
  const double stddev = std::sqrt(power * std::pow(10.0, -snr_db / 10.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, stddev);
  Eigen::VectorXd out = y;
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) += normal(rng);
  return out;
}

inline double mse(const Eigen::VectorXd& x, const Eigen::VectorXd& x_rec) {
  if (x.size() != x_rec.size()) throw ValidationError("mse: length mismatch");
  if (x.size() == 0) return 0.0;
  return (x_rec - x).squaredNorm() / static_cast<double>(x.size());
}

/// x_rec = U_k (M U_k)^+ y with the pseudo-inverse taken through an SVD that
/// drops singular values below kRankTolerance * sigma_max. The report's
/// error fields are left at zero; see `reconstruct_and_score`.
inline Reconstruction reconstruct_ls(const SpectralBasis& basis, std::size_t k, std::span<const NodeId> set,
                                     const Eigen::VectorXd& y) {
  const std::size_t n = basis.size();
  if (k < 1 || k > n) throw ValidationError("reconstruct_ls: bandwidth must satisfy 1 <= k <= n");
  const NodeSet nodes = make_node_set(n, set);
  if (nodes.empty()) throw ValidationError("reconstruct_ls: empty sampling set");
  if (static_cast<std::size_t>(y.size()) != nodes.size()) {
    throw ValidationError("reconstruct_ls: " + std::to_string(y.size()) + " samples for " +
                          std::to_string(nodes.size()) + " sampling nodes");
  }
  const Eigen::MatrixXd uk = basis.U.leftCols(static_cast<Eigen::Index>(k));
  const Eigen::MatrixXd a = select_rows(uk, nodes);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();

  Reconstruction out;
  out.report.sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  out.report.sigma_min = nodes.size() >= k ? sv(static_cast<Eigen::Index>(k - 1)) : 0.0;
  out.report.rank_deficient = !(out.report.sigma_min >= kRankTolerance * out.report.sigma_max) ||
                              out.report.sigma_max == 0.0;

  const double cutoff = kRankTolerance * out.report.sigma_max;
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  const Eigen::VectorXd proj = svd.matrixU().transpose() * y;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) coeffs += svd.matrixV().col(i) * (proj(i) / sv(i));
  }
  out.signal = uk * coeffs;
  return out;
}

/// Reconstruction plus error measures against the known truth x.
inline Reconstruction reconstruct_and_score(const SpectralBasis& basis, std::size_t k, std::span<const NodeId> set,
                                            const Eigen::VectorXd& y, const Eigen::VectorXd& truth) {
  Reconstruction rec = reconstruct_ls(basis, k, set, y);
  const double err2 = (rec.signal - truth).squaredNorm();
  rec.report.sse = err2;
  rec.report.mse = mse(truth, rec.signal);
  const double norm = truth.norm();
  rec.report.relative_error = norm > 0.0 ? std::sqrt(err2) / norm : std::sqrt(err2);
  return rec;
}

}  // namespace gbn
