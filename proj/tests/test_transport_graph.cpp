#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "flowgnn/errors.hpp"
#include "flowgnn/transport_graph.hpp"

namespace flowgnn {
namespace {

using testing::make_bidirectional;
using testing::make_network;

TEST(LineGraph, TwoLinkChain) {
  const RoadNetwork net = make_network({{0, 0}, {0.5, 0}, {1, 0}}, {{0, 1}, {1, 2}});
  const std::vector<double> flows{100, 100};
  const LineGraphSample s = to_line_graph(net, flows, "chain");
  EXPECT_EQ(s.num_nodes, 2u);
  ASSERT_EQ(s.edges.size(), 1u);
  EXPECT_EQ(s.edges[0], (GraphEdge{0, 1}));
  EXPECT_EQ(s.target_flow, flows);
  EXPECT_EQ(s.graph_id, "chain");
  EXPECT_EQ(s.source_num_road_nodes, 3u);
}

TEST(LineGraph, SingleLink) {
  const RoadNetwork net = make_network({{0, 0}, {1, 1}}, {{0, 1}});
  const LineGraphSample s = to_line_graph(net, std::vector<double>{5});
  EXPECT_EQ(s.num_nodes, 1u);
  EXPECT_TRUE(s.edges.empty());
}

TEST(LineGraph, BidirectionalTriangleExcludesUTurns) {
  const RoadNetwork net = make_bidirectional({{0, 0}, {1, 0}, {0, 1}}, {{0, 1}, {1, 2}, {2, 0}});
  const LineGraphSample s = to_line_graph(net, std::vector<double>(6, 1.0));
  EXPECT_EQ(s.num_nodes, 6u);
  EXPECT_EQ(s.edges.size(), 6u);
  for (const GraphEdge& e : s.edges) {
    const RoadLink& in = net.links[e.src];
    const RoadLink& out = net.links[e.dst];
    EXPECT_EQ(in.to, out.from);
    EXPECT_NE(out.to, in.from);
  }
}

TEST(LineGraph, FlowLengthMismatchIsDimensionError) {
  const RoadNetwork net = make_network({{0, 0}, {1, 1}}, {{0, 1}});
  EXPECT_THROW(to_line_graph(net, std::vector<double>{1, 2}), DimensionError);
}

TEST(LineGraph, FeatureRowsFollowSchema) {
  const RoadNetwork net =
      make_network({{0, 0, 1000, 200}, {0.5, 0}, {1, 0, 30, 4000}}, {{0, 1}, {1, 2}});
  const LineGraphSample s = to_line_graph(net, std::vector<double>{1, 2});
  ASSERT_EQ(s.num_features, line_graph_feature_schema().size());
  ASSERT_EQ(s.num_features, 9u);
  // link 0: zone -> plain node
  EXPECT_DOUBLE_EQ(s.feature(0, 0), 15.0);
  EXPECT_DOUBLE_EQ(s.feature(0, 1), 800.0);
  EXPECT_DOUBLE_EQ(s.feature(0, 2), 50.0);
  EXPECT_DOUBLE_EQ(s.feature(0, 3), 1000.0);
  EXPECT_DOUBLE_EQ(s.feature(0, 4), 200.0);
  EXPECT_DOUBLE_EQ(s.feature(0, 5), 0.0);
  EXPECT_DOUBLE_EQ(s.feature(0, 6), 0.0);
  EXPECT_DOUBLE_EQ(s.feature(0, 7), 1.0);
  EXPECT_DOUBLE_EQ(s.feature(0, 8), 0.0);
  // link 1: plain node -> zone
  EXPECT_DOUBLE_EQ(s.feature(1, 3), 0.0);
  EXPECT_DOUBLE_EQ(s.feature(1, 5), 30.0);
  EXPECT_DOUBLE_EQ(s.feature(1, 6), 4000.0);
  EXPECT_DOUBLE_EQ(s.feature(1, 7), 0.0);
  EXPECT_DOUBLE_EQ(s.feature(1, 8), 1.0);
}

// Property: edge count equals sum over nodes of indeg*outdeg minus U-turn
// pairs, checked against brute-force enumeration of all link pairs.
TEST(LineGraph, EdgeCountMatchesBruteForceOnRandomNetworks) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 19;
    const RoadNetwork net = testing::random_network(n, rng);
    const LineGraphSample s = to_line_graph(net, std::vector<double>(net.links.size(), 0.0));

    std::set<std::pair<int, int>> brute;
    for (const RoadLink& a : net.links) {
      for (const RoadLink& b : net.links) {
        if (a.id != b.id && a.to == b.from && !(b.to == a.from)) brute.insert({a.id, b.id});
      }
    }
    std::set<std::pair<int, int>> got;
    for (const GraphEdge& e : s.edges) got.insert({e.src, e.dst});
    EXPECT_EQ(got, brute);
    EXPECT_EQ(got.size(), s.edges.size()) << "duplicate edges";

    std::vector<std::size_t> indeg(n, 0), outdeg(n, 0);
    std::size_t uturns = 0;
    for (const RoadLink& l : net.links) {
      ++outdeg[l.from];
      ++indeg[l.to];
      for (const RoadLink& r : net.links) uturns += (r.from == l.to && r.to == l.from) ? 1 : 0;
    }
    std::size_t expected = 0;
    for (std::size_t v = 0; v < n; ++v) expected += indeg[v] * outdeg[v];
    EXPECT_EQ(s.edges.size(), expected - uturns);
  }
}

TEST(LineGraph, Deterministic) {
  std::mt19937_64 rng(5);
  const RoadNetwork net = testing::random_network(12, rng);
  const std::vector<double> flows(net.links.size(), 3.5);
  EXPECT_EQ(to_line_graph(net, flows, "x"), to_line_graph(net, flows, "x"));
}

LineGraphSample graph_of(std::size_t n, std::vector<GraphEdge> edges) {
  LineGraphSample s;
  s.num_nodes = n;
  s.num_features = 1;
  s.features.assign(n, 0.0);
  s.target_flow.assign(n, 0.0);
  s.edges = std::move(edges);
  return s;
}

TEST(Diameter, Examples) {
  EXPECT_EQ(graph_diameter(graph_of(3, {{0, 1}, {1, 2}})), 2u);
  EXPECT_EQ(graph_diameter(graph_of(1, {})), 0u);
  std::vector<GraphEdge> k4;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) k4.push_back({i, j});
    }
  }
  EXPECT_EQ(graph_diameter(graph_of(4, k4)), 1u);
  EXPECT_THROW(graph_diameter(graph_of(0, {})), DomainError);
}

TEST(Diameter, DirectionIgnored) {
  // 0 -> 1 <- 2: undirected path of length 2.
  EXPECT_EQ(graph_diameter(graph_of(3, {{0, 1}, {2, 1}})), 2u);
}

TEST(Diameter, LargestComponentOnly) {
  // path of 4 (diameter 3) plus a separate edge
  EXPECT_EQ(graph_diameter(graph_of(6, {{0, 1}, {1, 2}, {2, 3}, {4, 5}})), 3u);
}

// Floyd-Warshall oracle on random graphs.
TEST(Diameter, MatchesAllPairsOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const LineGraphSample s = testing::random_sample(3 + trial % 15, 1, 0.12, rng);
    const std::size_t n = s.num_nodes;
    const std::size_t inf = 1'000'000;
    std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, inf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (const GraphEdge& e : s.edges) d[e.src][e.dst] = d[e.dst][e.src] = 1;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
      }
    }
    // largest component, lowest member index on ties
    std::vector<int> comp(n, -1);
    std::vector<std::size_t> sizes;
    for (std::size_t i = 0; i < n; ++i) {
      if (comp[i] >= 0) continue;
      const int c = static_cast<int>(sizes.size());
      sizes.push_back(0);
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][j] < inf) {
          comp[j] = c;
          ++sizes[c];
        }
      }
    }
    const int big = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    std::size_t expected = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (comp[i] == big && comp[j] == big) expected = std::max(expected, d[i][j]);
      }
    }
    EXPECT_EQ(graph_diameter(s), expected) << "trial " << trial;
  }
}

TEST(SampleValidation, RejectsSelfEdgesAndNegativeFlows) {
  LineGraphSample s = graph_of(2, {{0, 0}});
  EXPECT_THROW(s.validate(), ValidationError);
  s.edges = {{0, 1}};
  s.target_flow = {1.0, -1.0};
  EXPECT_THROW(s.validate(), ValidationError);
  s.target_flow = {1.0, 2.0};
  EXPECT_NO_THROW(s.validate());
}

TEST(RoadNetworkValidation, RejectsBadLinks) {
  RoadNetwork net = make_network({{0, 0}, {1, 1}}, {{0, 1}});
  EXPECT_NO_THROW(net.validate());
  net.links[0].capacity = 0.0;
  EXPECT_THROW(net.validate(), ValidationError);
  net.links[0].capacity = 800.0;
  net.links[0].to = 7;
  EXPECT_THROW(net.validate(), ValidationError);
  net.links[0].to = 1;
  net.nodes[1].x = 1.5;
  EXPECT_THROW(net.validate(), ValidationError);
}

}  // namespace
}  // namespace flowgnn
