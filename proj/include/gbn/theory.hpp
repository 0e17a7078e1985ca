#pragma once

// Numerical checks of the spectral identities and bounds that tie a binary
// pattern's Fourier coefficients to vertex-domain quantities. Each check runs
// over many patterns and reports its worst margin.
//
// Cut identity. For s = 1_S,
//     s^T L s = sum_{v in S^c} w_S(v)      (total cut weight, unsquared).
// A squared variant, sum_{v in S^c} w_S(v)^2, also circulates; it coincides
// with the cut only when every w_S(v) is 0 or 1. The suite tests the
// unsquared form and reports how often the squared form disagrees.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gbn/graph.hpp"
#include "gbn/metrics.hpp"
#include "gbn/samplers.hpp"
#include "gbn/spectral.hpp"

namespace gbn {

struct IdentityCheck {
  std::string name;
  bool passed = true;
  bool informational = false;  // reported, never fails the suite
  std::size_t cases = 0;
  std::size_t violations = 0;
  double worst = 0.0;  // largest relative error, or largest bound violation
  std::string detail;
};

namespace detail {

inline IdentityCheck named_check(std::string name) {
  IdentityCheck c;
  c.name = std::move(name);
  return c;
}

inline double rel_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

inline void record(IdentityCheck& c, double err, double tol) {
  ++c.cases;
  c.worst = std::max(c.worst, err);
  if (!(err <= tol)) {
    ++c.violations;
    c.passed = false;
  }
}

}  // namespace detail

/// Spectral quantities of one binary pattern.
struct PatternSpectrum {
  double m = 0.0;
  double n = 0.0;
  double tail_energy = 0.0;     // sum_{l>=2} shat(l)^2
  double energy = 0.0;          // sum_{l>=2} mu_l shat(l)^2
  double inverse_energy = 0.0;  // sum_{l>=2} shat(l)^2 / mu_l
  double redness = 0.0;
};

inline PatternSpectrum pattern_spectrum(const SpectralBasis& basis, const SamplingPattern& s) {
  const Eigen::VectorXd shat = gft(basis, s.indicator());
  PatternSpectrum p;
  p.m = static_cast<double>(s.count());
  p.n = static_cast<double>(s.size());
  for (Eigen::Index l = 1; l < shat.size(); ++l) {
    const double c2 = shat(l) * shat(l);
    p.tail_energy += c2;
    p.energy += basis.mu(l) * c2;
    p.inverse_energy += c2 / basis.mu(l);
  }
  p.redness = p.m > 0 ? p.inverse_energy / p.m : 0.0;
  return p;
}

/// Lower and upper redness bounds from the Cauchy and Kantorovich
/// inequalities:
///   m (1 - m/N)^2 / E  <=  R_s  <=  (mu_2 + mu_N)^2 / (4 mu_2 mu_N) * m (1 - m/N)^2 / E,
/// with E = sum_{l>=2} mu_l shat(l)^2.
struct RednessBounds {
  double lower = 0.0;
  double upper = 0.0;
};

inline RednessBounds redness_bounds(const SpectralBasis& basis, const PatternSpectrum& p) {
  const double mu2 = basis.mu(1);
  const double mun = basis.mu(basis.mu.size() - 1);
  const double base = p.m * std::pow(1.0 - p.m / p.n, 2) / p.energy;
  return {base, (mu2 + mun) * (mu2 + mun) / (4.0 * mu2 * mun) * base};
}

/// Runs the identity suite over `patterns`; every pattern needs 1 <= m < N.
inline std::vector<IdentityCheck> check_pattern_identities(const Graph& g, const SpectralBasis& basis,
                                                           std::span<const SamplingPattern> patterns) {
  const Eigen::MatrixXd L = laplacian(g);
  const double vol_g = volume(g);
  IdentityCheck tail = detail::named_check("parseval-tail: sum_{l>=2} shat^2 = m(1-m/N)");
  IdentityCheck comp = detail::named_check("complement: sum mu shat_bar^2 = sum mu shat^2");
  IdentityCheck kant = detail::named_check("redness-bounds: Cauchy lower <= R_s <= Kantorovich upper");
  IdentityCheck volb = detail::named_check("volume-bound: vol(S) >= m^2(1-m/N)^2 / sum shat^2/mu");
  IdentityCheck cut = detail::named_check("cut-identity: s^T L s = sum_{v in S^c} w_S(v)");
  IdentityCheck cutbar = detail::named_check("cut-identity-complement: sbar^T L sbar = sum_{v in S^c} w_S(v)");
  IdentityCheck volsplit = detail::named_check("volume-split: vol(G) = vol(S) + vol(S^c)");
  IdentityCheck ks = detail::named_check("ks-squared-sums: K_S^2 + sum_{S^c minus v'} w_S^2 = sum_{S^c} w_S^2");
  IdentityCheck squared = detail::named_check("cut-identity-squared-variant: s^T L s = sum_{v in S^c} w_S(v)^2");
  squared.informational = true;

  for (const auto& s : patterns) {
    if (s.count() == 0 || s.count() == s.size()) {
      throw ValidationError("check_pattern_identities: patterns must satisfy 1 <= m < N");
    }
    const auto p = pattern_spectrum(basis, s);
    const Eigen::VectorXd ind = s.indicator();
    const Eigen::VectorXd bar = Eigen::VectorXd::Ones(ind.size()) - ind;
    const Eigen::VectorXd barhat = gft(basis, bar);

    detail::record(tail, detail::rel_gap(p.tail_energy, p.m * (1.0 - p.m / p.n)), 1e-9);
    detail::record(comp, detail::rel_gap(spectral_energy(basis, barhat), p.energy), 1e-9);

    const auto b = redness_bounds(basis, p);
    const double scale = std::max(1.0, p.redness);
    detail::record(kant, std::max({0.0, (b.lower - p.redness) / scale, (p.redness - b.upper) / scale}), 1e-9);

    const double vol_s = volume(g, std::span<const NodeId>(s.support()));
    const double vol_lb = p.m * p.m * std::pow(1.0 - p.m / p.n, 2) / p.inverse_energy;
    detail::record(volb, std::max(0.0, (vol_lb - vol_s) / std::max(1.0, vol_s)), 1e-9);

    const auto w = boundary_weights(g, s.support());
    double cut_sum = 0.0;
    double cut_sq = 0.0;
    for (NodeId v = 0; v < g.size(); ++v) {
      if (s.contains(v)) continue;
      cut_sum += w[v];
      cut_sq += w[v] * w[v];
    }
    const double quad = ind.dot(L * ind);
    detail::record(cut, detail::rel_gap(quad, cut_sum), 1e-10);
    detail::record(cutbar, detail::rel_gap(bar.dot(L * bar), cut_sum), 1e-10);
    detail::record(squared, detail::rel_gap(quad, cut_sq), 1e-10);

    const NodeSet rest = s.complement();
    detail::record(volsplit,
                   detail::rel_gap(vol_g, vol_s + volume(g, std::span<const NodeId>(rest))), 1e-10);

    const auto sums = ks_squared_sums(g, s.support());
    if (sums.ks > 0.0) detail::record(ks, detail::rel_gap(sums.lhs, sums.rhs), 1e-9);
  }
  squared.passed = true;
  squared.detail = std::to_string(squared.violations) + " of " + std::to_string(squared.cases) +
                   " patterns disagree with the squared form; the unsquared cut identity is the one that holds";
  return {tail, comp, kant, volb, cut, cutbar, volsplit, ks, squared};
}

/// Quadratic-form checks on random signals: L 1 = 0 and
/// x^T L x = sum over edges of W(u,v) (x(u) - x(v))^2 >= 0.
inline std::vector<IdentityCheck> check_laplacian_identities(const Graph& g, std::size_t trials, std::uint64_t seed) {
  const Eigen::MatrixXd L = laplacian(g);
  IdentityCheck rows = detail::named_check("laplacian-row-sums: L 1 = 0");
  IdentityCheck quad = detail::named_check("laplacian-quadratic-form: x^T L x = sum_edges W (x_u - x_v)^2 >= 0");
  const double scale = std::max(1.0, L.cwiseAbs().maxCoeff());
  detail::record(rows, (L * Eigen::VectorXd::Ones(L.rows())).cwiseAbs().maxCoeff() / scale, 1e-12);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t t = 0; t < trials; ++t) {
    Eigen::VectorXd x(L.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
    double edge_sum = 0.0;
    for (const auto& e : g.edges()) {
      const double d = x(static_cast<Eigen::Index>(e.u)) - x(static_cast<Eigen::Index>(e.v));
      edge_sum += e.w * d * d;
    }
    const double form = x.dot(L * x);
    detail::record(quad, form < -1e-12 ? 1.0 : detail::rel_gap(form, edge_sum), 1e-10);
  }
  return {rows, quad};
}

/// Rank checks behind the uniqueness conditions: for each bandwidth k with
/// mu_k < Lambda_{S^c} (removability of the complement) or mu_k < K_S, the
/// rows of U_k on S must have full column rank k.
inline constexpr double kPremiseMargin = 1e-9;

struct UniquenessTally {
  std::size_t lambda_cases = 0;
  std::size_t lambda_counterexamples = 0;
  std::size_t ks_cases = 0;
  std::size_t ks_counterexamples = 0;
};

inline UniquenessTally check_uniqueness(const Graph& g, const SpectralBasis& basis, const SamplingPattern& s) {
  UniquenessTally t;
  if (s.count() == 0 || s.count() == s.size()) return t;
  const Eigen::MatrixXd L = laplacian(g);
  const NodeSet rest = s.complement();
  const double lambda_c = lambda_set(L, rest);
  const double ks = uniqueness_constant_ks(g, s.support());
  // The premises are strict. Exact ties (P3 with S = {1}: mu_2 = Lambda = K_S
  // = 1, where the rank does drop) can land a few ulps on either side, so a
  // premise counts only when it holds by a relative margin.
  auto below = [](double mu, double bound) { return mu < bound - kPremiseMargin * std::max(1.0, std::abs(bound)); };
  for (std::size_t k = 1; k <= basis.size(); ++k) {
    const double mu_k = basis.mu(static_cast<Eigen::Index>(k - 1));
    const bool by_lambda = below(mu_k, lambda_c);
    const bool by_ks = below(mu_k, ks);
    if (!by_lambda && !by_ks) continue;
    const Eigen::MatrixXd rows = select_rows(basis.U.leftCols(static_cast<Eigen::Index>(k)), s.support());
    const bool full = numerical_rank(rows, 1e-10) == k;
    if (by_lambda) {
      ++t.lambda_cases;
      if (!full) ++t.lambda_counterexamples;
    }
    if (by_ks) {
      ++t.ks_cases;
      if (!full) ++t.ks_counterexamples;
    }
  }
  return t;
}

/// Patterns for the suite: every proper non-empty subset when n <= 12,
/// otherwise `count` uniformly random patterns with m uniform in [1, n-1].
inline std::vector<SamplingPattern> identity_patterns(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<SamplingPattern> out;
  if (n < 2) return out;
  if (n <= 12) {
    for (std::uint32_t bits = 1; bits + 1 < (1U << n); ++bits) {
      NodeSet set;
      for (NodeId v = 0; v < n; ++v) {
        if (bits & (1U << v)) set.push_back(v);
      }
      out.emplace_back(n, std::move(set));
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(1, n - 1);
  for (std::size_t i = 0; i < count; ++i) out.push_back(white_noise(n, size(rng), rng()));
  return out;
}

}  // namespace gbn
