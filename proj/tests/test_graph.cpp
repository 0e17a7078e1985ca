#include <gtest/gtest.h>

#include <random>

#include "gbn/distances.hpp"
#include "gbn/generators.hpp"
#include "gbn/graph.hpp"
#include "gbn/spectral.hpp"
#include "oracles.hpp"

using namespace gbn;

namespace {

Graph p3() { return path_graph(3); }
Graph k3() { return complete_graph(3); }

}  // namespace

TEST(Laplacian, PathThree) {
  Eigen::MatrixXd expected(3, 3);
  expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  EXPECT_EQ(laplacian(p3()), expected);
}

TEST(Laplacian, SingleEdgeWeightTwo) {
  Graph g(2, {{0, 1, 2.0}});
  Eigen::MatrixXd expected(2, 2);
  expected << 2, -2, -2, 2;
  EXPECT_EQ(laplacian(g), expected);
}

TEST(Laplacian, TriangleEigenvalues) {
  const auto b = eigendecompose(laplacian(k3()));
  EXPECT_NEAR(b.mu(0), 0.0, 1e-12);
  EXPECT_NEAR(b.mu(1), 3.0, 1e-12);
  EXPECT_NEAR(b.mu(2), 3.0, 1e-12);
}

TEST(Laplacian, MatchesWeightQueriesOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = oracle::random_connected_graph(15, 0.2, seed);
    EXPECT_TRUE(laplacian(g).isApprox(oracle::laplacian_from_weights(g), 1e-14));
  }
}

TEST(Laplacian, RowSumsAndQuadraticForm) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = oracle::random_connected_graph(20, 0.15, seed);
    const auto L = laplacian(g);
    EXPECT_LT((L * Eigen::VectorXd::Ones(20)).cwiseAbs().maxCoeff(), 1e-12);
    for (int t = 0; t < 20; ++t) {
      Eigen::VectorXd x(20);
      for (auto& v : x) v = normal(rng);
      double edge_sum = 0.0;
      for (const auto& e : g.edges()) edge_sum += e.w * std::pow(x(e.u) - x(e.v), 2);
      const double form = x.dot(L * x);
      EXPECT_GE(form, 0.0);
      EXPECT_NEAR(form, edge_sum, 1e-10 * std::max(1.0, edge_sum));
    }
  }
}

TEST(Volume, Examples) {
  EXPECT_DOUBLE_EQ(volume(p3()), 4.0);
  const NodeId mid[] = {1};
  EXPECT_DOUBLE_EQ(volume(p3(), std::span<const NodeId>(mid)), 2.0);
  EXPECT_DOUBLE_EQ(volume(k3()), 6.0);
}

TEST(Volume, RejectsOutOfRange) {
  const NodeId bad[] = {3};
  EXPECT_THROW(volume(p3(), std::span<const NodeId>(bad)), ValidationError);
}

TEST(Volume, SplitsOverComplement) {
  const auto g = oracle::random_connected_graph(25, 0.2, 3);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    NodeSet s;
    for (NodeId v = 0; v < 25; ++v) {
      if (rng() % 3 == 0) s.push_back(v);
    }
    const auto rest = complement(25, s);
    EXPECT_NEAR(volume(g), volume(g, std::span<const NodeId>(s)) + volume(g, std::span<const NodeId>(rest)), 1e-10);
  }
}

TEST(Graph, RejectsInvalidEdges) {
  EXPECT_THROW(Graph(2, {{0, 0, 1.0}, {0, 1, 1.0}}), ValidationError);
  EXPECT_THROW(Graph(2, {{0, 1, 1.0}, {1, 0, 1.0}}), ValidationError);
  EXPECT_THROW(Graph(2, {{0, 1, 0.0}}), ValidationError);
  EXPECT_THROW(Graph(2, {{0, 1, -1.0}}), ValidationError);
  EXPECT_THROW(Graph(3, {{0, 1, 1.0}}), ValidationError);  // disconnected
  EXPECT_THROW(Graph(2, {{0, 2, 1.0}}), ValidationError);
}

TEST(Graph, WeightIsSymmetric) {
  const auto g = oracle::random_connected_graph(12, 0.3, 9);
  for (NodeId u = 0; u < 12; ++u) {
    for (NodeId v = 0; v < 12; ++v) EXPECT_EQ(g.weight(u, v), g.weight(v, u));
  }
}

TEST(Geodesic, PathThree) {
  const auto gamma = geodesic_distances(p3());
  EXPECT_DOUBLE_EQ(gamma(0, 2), 2.0);
}

TEST(Geodesic, ShortcutThroughLightEdges) {
  Graph g(3, {{0, 1, 5.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  EXPECT_DOUBLE_EQ(geodesic_distances(g)(0, 1), 2.0);
}

TEST(Geodesic, MatchesBellmanFordOnSensorGraph) {
  const auto g = sensor_graph(20, 6, 11).graph;
  const auto gamma = geodesic_distances(g);
  const auto bf = oracle::bellman_ford_all_pairs(g);
  for (NodeId u = 0; u < 20; ++u) {
    for (NodeId v = 0; v < 20; ++v) EXPECT_EQ(gamma(u, v), bf(u, v));
  }
}

TEST(Geodesic, MetricProperties) {
  const auto g = oracle::random_connected_graph(30, 0.1, 4);
  const auto gamma = geodesic_distances(g);
  for (NodeId u = 0; u < 30; ++u) {
    EXPECT_EQ(gamma(u, u), 0.0);
    for (NodeId v = 0; v < 30; ++v) {
      EXPECT_EQ(gamma(u, v), gamma(v, u));
      for (NodeId w = 0; w < 30; w += 3) EXPECT_LE(gamma(u, v), gamma(u, w) + gamma(w, v) + 1e-12);
    }
  }
}

TEST(Geodesic, DisconnectedPairIsNamed) {
  try {
    Graph g(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    FAIL() << "disconnected graph accepted";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("no path between node 0 and node 2"), std::string::npos);
  }
}

TEST(Balls, OpenBall) {
  const auto gamma = geodesic_distances(p3());
  EXPECT_EQ(open_ball(gamma, 0, 1.5), (NodeSet{0, 1}));
  EXPECT_EQ(open_ball(gamma, 0, 0.5), (NodeSet{0}));
  EXPECT_EQ(open_ball(gamma, 1, 2.5), (NodeSet{0, 1, 2}));
  EXPECT_THROW(open_ball(gamma, 0, 0.0), ValidationError);
}

TEST(Balls, Annulus) {
  const auto gamma = geodesic_distances(p3());
  EXPECT_EQ(annulus(gamma, 1, 1.0, 0.5), (NodeSet{0, 2}));
  EXPECT_EQ(annulus(gamma, 1, 1.0, 1.5), (NodeSet{0, 1, 2}));
  EXPECT_EQ(annulus(gamma, 0, 2.0, 0.5), (NodeSet{2}));
  EXPECT_THROW(annulus(gamma, 0, 1.0, 0.0), ValidationError);
}

TEST(InducedSubgraph, Examples) {
  const NodeId a[] = {0, 1};
  const auto s1 = induced_subgraph(p3(), a);
  EXPECT_EQ(s1.edges.size(), 1u);
  EXPECT_TRUE(s1.connected);

  const NodeId b[] = {0, 2};
  const auto s2 = induced_subgraph(p3(), b);
  EXPECT_TRUE(s2.edges.empty());
  EXPECT_FALSE(s2.connected);

  const NodeId c[] = {0, 1, 2};
  const auto s3 = induced_subgraph(k3(), c);
  EXPECT_EQ(s3.edges.size(), 3u);
  EXPECT_TRUE(s3.connected);
  EXPECT_EQ(s3.laplacian(), laplacian(k3()));

  EXPECT_THROW(induced_subgraph(p3(), std::span<const NodeId>()), ValidationError);
}

TEST(BoundaryWeight, Examples) {
  const NodeId s1[] = {1};
  EXPECT_DOUBLE_EQ(boundary_weight(p3(), s1, 0), 1.0);
  const NodeId s2[] = {0, 2};
  EXPECT_DOUBLE_EQ(boundary_weight(p3(), s2, 1), 2.0);
  const NodeId s3[] = {0};
  EXPECT_DOUBLE_EQ(boundary_weight(p3(), s3, 0), 0.0);
}

TEST(CutIdentity, UnsquaredFormHolds) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = oracle::random_connected_graph(10, 0.3, seed);
    const auto L = laplacian(g);
    for (std::uint32_t bits = 1; bits + 1 < (1u << 10); bits += 7) {
      NodeSet set;
      for (NodeId v = 0; v < 10; ++v) {
        if (bits & (1u << v)) set.push_back(v);
      }
      const SamplingPattern s(10, set);
      const auto ind = s.indicator();
      double cut = 0.0;
      for (auto v : s.complement()) cut += boundary_weight(g, set, v);
      EXPECT_NEAR(ind.dot(L * ind), cut, 1e-10 * std::max(1.0, cut));
      EXPECT_NEAR(cut_weight(g, set), cut, 1e-12 * std::max(1.0, cut));
    }
  }
}

TEST(CutIdentity, SquaredVariantFailsOnTriangle) {
  // K3 with S = {0, 1}: node 2 has w_S = 2, so the squared sum is 4 while
  // the quadratic form is 2.
  const auto g = k3();
  const SamplingPattern s(3, {0, 1});
  const auto ind = s.indicator();
  const double w = boundary_weight(g, s.support(), 2);
  EXPECT_DOUBLE_EQ(ind.dot(laplacian(g) * ind), 2.0);
  EXPECT_DOUBLE_EQ(w, 2.0);
  EXPECT_NE(ind.dot(laplacian(g) * ind), w * w);
}

TEST(CutIdentity, PathThreeExhaustive) {
  // The unsquared form holds for every subset; the squared form breaks
  // exactly where some node outside S has w_S(v) = 2, i.e. S = {0, 2}.
  const auto g = p3();
  std::size_t squared_mismatches = 0;
  for (std::uint32_t bits = 1; bits < 7; ++bits) {
    NodeSet set;
    for (NodeId v = 0; v < 3; ++v) {
      if (bits & (1u << v)) set.push_back(v);
    }
    const SamplingPattern s(3, set);
    double sum = 0.0, sq = 0.0;
    for (auto v : s.complement()) {
      const double w = boundary_weight(g, set, v);
      sum += w;
      sq += w * w;
    }
    const auto ind = s.indicator();
    EXPECT_DOUBLE_EQ(ind.dot(laplacian(g) * ind), sum);
    if (sum != sq) ++squared_mismatches;
  }
  EXPECT_EQ(squared_mismatches, 1u);
}

TEST(SamplingPattern, Invariants) {
  const SamplingPattern s(5, {3, 1});
  EXPECT_EQ(s.support(), (NodeSet{1, 3}));
  EXPECT_EQ(s.count(), 2u);
  EXPECT_DOUBLE_EQ(s.indicator().sum(), 2.0);
  EXPECT_EQ(s.complement(), (NodeSet{0, 2, 4}));
  EXPECT_THROW(SamplingPattern(3, {1, 1}), ValidationError);
  EXPECT_THROW(SamplingPattern(3, {3}), ValidationError);
  const std::uint8_t bits[] = {0, 1, 0, 1, 0};
  EXPECT_EQ(SamplingPattern::from_indicator(bits), s);
}
