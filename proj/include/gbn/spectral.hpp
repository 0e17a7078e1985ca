#pragma once

// Laplacian eigenbasis, graph Fourier transform and spectral measures of
// signals and sampling patterns.
//
// Index convention: formulas count eigenvalues from 1 (mu_1 = 0 <= mu_2 <=
// ... <= mu_N). Arrays here are 0-based, so
//
//   formula index l   | array index
//   ------------------+------------
//   1 (mu_1 = 0)      | 0
//   2 (mu_2)          | 1
//   N (mu_N)          | N - 1
//
// "Bandwidth k" means the first k eigenvectors, array columns 0..k-1.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gbn/error.hpp"
#include "gbn/graph.hpp"

namespace gbn {

struct SpectralBasis {
  Eigen::VectorXd mu;  // ascending eigenvalues
  Eigen::MatrixXd U;   // column l pairs with mu(l)

  std::size_t size() const noexcept { return static_cast<std::size_t>(mu.size()); }
  /// First k eigenvectors (U_k).
  auto leading(std::size_t k) const { return U.leftCols(static_cast<Eigen::Index>(k)); }
};

/// Dense symmetric eigendecomposition with eigenvalues ascending and each
/// eigenvector signed so that its first entry above 1e-10 in magnitude is
/// positive.
inline SpectralBasis eigendecompose(const Eigen::MatrixXd& L) {
  if (L.rows() != L.cols()) throw ValidationError("eigendecompose: matrix is not square");
  const double scale = std::max(1.0, L.cwiseAbs().maxCoeff());
  if ((L - L.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ValidationError("eigendecompose: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L);
  if (solver.info() != Eigen::Success) throw NumericError("eigendecompose: eigensolver did not converge");
  SpectralBasis basis{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index c = 0; c < basis.U.cols(); ++c) {
    for (Eigen::Index r = 0; r < basis.U.rows(); ++r) {
      const double x = basis.U(r, c);
      if (std::abs(x) > 1e-10) {
        if (x < 0.0) basis.U.col(c) *= -1.0;
        break;
      }
    }
  }
  return basis;
}

inline Eigen::VectorXd gft(const SpectralBasis& basis, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != basis.size()) {
    throw ValidationError("gft: signal length " + std::to_string(x.size()) + " does not match graph size " +
                          std::to_string(basis.size()));
  }
  return basis.U.transpose() * x;
}

inline Eigen::VectorXd igft(const SpectralBasis& basis, const Eigen::VectorXd& xhat) {
  if (static_cast<std::size_t>(xhat.size()) != basis.size()) {
    throw ValidationError("igft: coefficient length " + std::to_string(xhat.size()) + " does not match graph size " +
                          std::to_string(basis.size()));
  }
  return basis.U * xhat;
}

/// Spectral coefficient distribution shared by both signal models.
struct CoefficientDistribution {
  double mean = 1.0;
  double stddev = 0.5;
};

inline Eigen::VectorXd draw_coefficients(std::size_t count, std::uint64_t seed, CoefficientDistribution dist = {}) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(dist.mean, dist.stddev);
  Eigen::VectorXd c(static_cast<Eigen::Index>(count));
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = normal(rng);
  return c;
}

/// Bandlimited signal x = U_k c with c ~ N(1, 0.5^2).
inline Eigen::VectorXd signal_sm1(const SpectralBasis& basis, std::size_t k, std::uint64_t seed) {
  if (k < 1 || k > basis.size()) throw ValidationError("signal_sm1: bandwidth must satisfy 1 <= k <= n");
  return basis.leading(k) * draw_coefficients(k, seed);
}

/// Spectral modulation h(mu): 1 up to mu_ref, exp(-4 (mu - mu_ref)) beyond.
inline double sm2_modulation(double mu, double mu_ref) {
  return mu <= mu_ref ? 1.0 : std::exp(-4.0 * (mu - mu_ref));
}

/// Full-band signal whose coefficients c ~ N(1, 0.5^2) are shaped by h(mu)
/// with mu_ref = mu at formula index `ref_index` (1-based, e.g. 50).
inline Eigen::VectorXd signal_sm2(const SpectralBasis& basis, std::size_t ref_index, std::uint64_t seed) {
  if (ref_index < 1 || ref_index > basis.size()) {
    throw ValidationError("signal_sm2: reference index must satisfy 1 <= index <= n");
  }
  const double mu_ref = basis.mu(static_cast<Eigen::Index>(ref_index - 1));
  Eigen::VectorXd xhat = draw_coefficients(basis.size(), seed);
  for (Eigen::Index l = 0; l < xhat.size(); ++l) xhat(l) *= sm2_modulation(basis.mu(l), mu_ref);
  return igft(basis, xhat);
}

namespace detail {

inline void require_connected_spectrum(const SpectralBasis& basis, const char* who) {
  if (basis.size() >= 2 && !(basis.mu(1) > 1e-12)) {
    throw ValidationError(std::string(who) + ": mu_2 is zero; the graph must be connected");
  }
}

}  // namespace detail

/// sum over l >= 2 of mu_l xhat(l)^2  (equals x^T L x).
inline double spectral_energy(const SpectralBasis& basis, const Eigen::VectorXd& xhat) {
  double total = 0.0;
  for (Eigen::Index l = 1; l < xhat.size(); ++l) total += basis.mu(l) * xhat(l) * xhat(l);
  return total;
}

/// sum over l >= 2 of xhat(l)^2 / mu_l.
inline double inverse_spectral_energy(const SpectralBasis& basis, const Eigen::VectorXd& xhat) {
  detail::require_connected_spectrum(basis, "inverse_spectral_energy");
  double total = 0.0;
  for (Eigen::Index l = 1; l < xhat.size(); ++l) total += xhat(l) * xhat(l) / basis.mu(l);
  return total;
}

/// Low-frequency content of a pattern: (1/m) sum_{l>=2} shat(l)^2 / mu_l.
inline double redness(const SpectralBasis& basis, const SamplingPattern& s) {
  if (s.count() == 0) throw ValidationError("redness: empty sampling pattern");
  if (s.size() != basis.size()) throw ValidationError("redness: pattern size does not match graph size");
  return inverse_spectral_energy(basis, gft(basis, s.indicator())) / static_cast<double>(s.count());
}

/// Averaged normalized periodogram of binary patterns,
///   p(l) = (N / q) sum_i shat_i(l)^2 / ||shat_i||^2,   l = 2..N.
/// Entry j of the result is formula index l = j + 2 and pairs with mu(j + 1).
inline Eigen::VectorXd power_spectrum(const SpectralBasis& basis, std::span<const SamplingPattern> patterns) {
  if (patterns.empty()) throw ValidationError("power_spectrum: no patterns");
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::VectorXd p = Eigen::VectorXd::Zero(std::max<Eigen::Index>(n - 1, 0));
  for (const auto& s : patterns) {
    if (s.size() != basis.size()) throw ValidationError("power_spectrum: pattern size does not match graph size");
    if (s.count() == 0) throw ValidationError("power_spectrum: empty pattern has no normalized spectrum");
    const Eigen::VectorXd shat = gft(basis, s.indicator());
    const double energy = shat.squaredNorm();
    for (Eigen::Index l = 1; l < n; ++l) p(l - 1) += shat(l) * shat(l) / energy;
  }
  p *= static_cast<double>(n) / static_cast<double>(patterns.size());
  return p;
}

/// Columns `cols` of `m`, in the given order.
inline Eigen::MatrixXd select_columns(const Eigen::MatrixXd& m, std::span<const NodeId> cols) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(static_cast<Eigen::Index>(cols[j]));
  return out;
}

/// Rows `rows` of `m`, in the given order.
inline Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, std::span<const NodeId> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

inline Eigen::MatrixXd principal_submatrix(const Eigen::MatrixXd& m, std::span<const NodeId> idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd out(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      out(i, j) = m(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]),
                    static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)]));
    }
  }
  return out;
}

/// L^p by repeated squaring.
inline Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& L, unsigned p) {
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(L.rows(), L.cols());
  Eigen::MatrixXd base = L;
  while (p > 0) {
    if (p & 1U) result = result * base;
    p >>= 1U;
    if (p > 0) base = base * base;
  }
  return result;
}

/// Number of singular values above rel_tol * sigma_max.
inline std::size_t numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-10) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

/// Cutoff-frequency proxy of order q for sampling set S:
///   Omega_q(S) = sigma_min((L^{2q})_{S^c,S^c})^{1/(2q)}.
inline double cutoff_proxy(const Eigen::MatrixXd& L, std::span<const NodeId> set, unsigned q) {
  if (q < 1) throw ValidationError("cutoff_proxy: order q must be >= 1");
  const auto n = static_cast<std::size_t>(L.rows());
  const NodeSet rest = complement(n, set);
  if (rest.empty()) throw ValidationError("cutoff_proxy: sampling set covers every node");
  const Eigen::MatrixXd reduced = principal_submatrix(matrix_power(L, 2 * q), rest);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(reduced, Eigen::EigenvaluesOnly);
  const double smallest = std::max(0.0, solver.eigenvalues()(0));
  return std::pow(smallest, 1.0 / (2.0 * q));
}

/// Removability constant of S: the largest Lambda with ||x|| <= ||Lx|| / Lambda
/// for every x supported on S, i.e. the smallest singular value of L[:, S].
inline double lambda_set(const Eigen::MatrixXd& L, std::span<const NodeId> set) {
  if (set.empty()) throw ValidationError("lambda_set: empty node set");
  const auto n = static_cast<std::size_t>(L.rows());
  const NodeSet cols = make_node_set(n, set);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(select_columns(L, cols));
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1);
}

}  // namespace gbn
