#include <gtest/gtest.h>

#include "gbn/generators.hpp"
#include "gbn/theory.hpp"
#include "oracles.hpp"

using namespace gbn;

namespace {

void expect_all_pass(const std::vector<IdentityCheck>& checks) {
  for (const auto& c : checks) {
    EXPECT_TRUE(c.passed) << c.name << ": " << c.violations << " of " << c.cases << " violated, worst " << c.worst;
    EXPECT_GT(c.cases, 0u) << c.name;
  }
}

const IdentityCheck& find(const std::vector<IdentityCheck>& checks, const std::string& prefix) {
  for (const auto& c : checks) {
    if (c.name.rfind(prefix, 0) == 0) return c;
  }
  throw std::runtime_error("no check named " + prefix);
}

}  // namespace

TEST(Identities, PathThreeExhaustive) {
  const auto g = path_graph(3);
  const auto b = eigendecompose(laplacian(g));
  const auto patterns = identity_patterns(3, 0, 0);
  EXPECT_EQ(patterns.size(), 6u);
  const auto checks = check_pattern_identities(g, b, patterns);
  expect_all_pass(checks);
  const auto& sq = find(checks, "cut-identity-squared-variant");
  EXPECT_TRUE(sq.informational);
  EXPECT_EQ(sq.violations, 1u);  // S = {0, 2}
}

TEST(Identities, RandomGraphsAllSubsets) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = oracle::random_connected_graph(10, 0.3, seed);
    const auto b = eigendecompose(laplacian(g));
    const auto patterns = identity_patterns(10, 0, seed);
    EXPECT_EQ(patterns.size(), 1022u);
    const auto checks = check_pattern_identities(g, b, patterns);
    expect_all_pass(checks);
    EXPECT_GT(find(checks, "cut-identity-squared-variant").violations, 0u);
  }
}

TEST(Identities, GeneratedFamilies) {
  const std::vector<Graph> graphs{sensor_graph(120, 6, 1).graph, community_graph(120, 4, 2).graph,
                                  barabasi_albert(120, 2, 3), grid_graph(8, 10)};
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const auto b = eigendecompose(laplacian(graphs[i]));
    expect_all_pass(check_pattern_identities(graphs[i], b, identity_patterns(graphs[i].size(), 250, 40 + i)));
  }
}

TEST(Identities, RejectsTrivialPatterns) {
  const auto g = path_graph(3);
  const auto b = eigendecompose(laplacian(g));
  const std::vector<SamplingPattern> bad{SamplingPattern(3, {0, 1, 2})};
  EXPECT_THROW(check_pattern_identities(g, b, bad), ValidationError);
}

TEST(Identities, LaplacianQuadraticForm) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    expect_all_pass(check_laplacian_identities(oracle::random_connected_graph(25, 0.2, seed), 100, seed));
  }
}

TEST(Uniqueness, PathThreeTieIsNotAPremise) {
  // S = {1}: mu_2 = Lambda_{S^c} = K_S = 1 and u_2(1) = 0, so rank drops to 1.
  // The strict premises fail, so only k = 1 is checked.
  const auto g = path_graph(3);
  const auto b = eigendecompose(laplacian(g));
  const auto t = check_uniqueness(g, b, SamplingPattern(3, {1}));
  EXPECT_EQ(t.lambda_cases, 1u);
  EXPECT_EQ(t.ks_cases, 1u);
  EXPECT_EQ(t.lambda_counterexamples + t.ks_counterexamples, 0u);
  for (const auto& s : identity_patterns(3, 0, 0)) {
    const auto u = check_uniqueness(g, b, s);
    EXPECT_EQ(u.lambda_counterexamples + u.ks_counterexamples, 0u);
  }
}

TEST(Uniqueness, NoCounterexamples) {
  std::mt19937_64 rng(17);
  std::size_t lambda_cases = 0, ks_cases = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 10 + seed % 21;
    const auto g = oracle::random_connected_graph(n, 0.25, 900 + seed, seed % 2 == 0);
    const auto b = eigendecompose(laplacian(g));
    for (int t = 0; t < 10; ++t) {
      const auto s = white_noise(n, 1 + rng() % (n - 1), rng());
      const auto tally = check_uniqueness(g, b, s);
      EXPECT_EQ(tally.lambda_counterexamples, 0u);
      EXPECT_EQ(tally.ks_counterexamples, 0u);
      lambda_cases += tally.lambda_cases;
      ks_cases += tally.ks_cases;
    }
  }
  EXPECT_GT(lambda_cases, 0u);
  EXPECT_GT(ks_cases, 0u);
}
