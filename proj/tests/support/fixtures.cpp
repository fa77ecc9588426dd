#include "fixtures.hpp"

#include <cmath>
#include <string>

namespace flowgnn::testing {

namespace {

RoadNetwork nodes_only(const std::vector<NodeSpec>& nodes) {
  RoadNetwork net;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    RoadNode n{static_cast<int>(i), nodes[i].x, nodes[i].y, std::nullopt};
    if (nodes[i].residents >= 0) n.zone = ZoneInfo{nodes[i].residents, nodes[i].employees};
    net.nodes.push_back(n);
  }
  return net;
}

void add_link(RoadNetwork& net, int a, int b) {
  const RoadNode& na = net.nodes[a];
  const RoadNode& nb = net.nodes[b];
  const double len = std::hypot(na.x - nb.x, na.y - nb.y) * kRegionScaleKm;
  net.links.push_back({static_cast<int>(net.links.size()), a, b, len, 800.0, 50.0});
}

}  // namespace

RoadNetwork make_network(const std::vector<NodeSpec>& nodes,
                         const std::vector<std::pair<int, int>>& links) {
  RoadNetwork net = nodes_only(nodes);
  for (const auto& [a, b] : links) add_link(net, a, b);
  return net;
}

RoadNetwork make_bidirectional(const std::vector<NodeSpec>& nodes,
                               const std::vector<std::pair<int, int>>& pairs) {
  RoadNetwork net = nodes_only(nodes);
  for (const auto& [a, b] : pairs) {
    add_link(net, a, b);
    add_link(net, b, a);
  }
  return net;
}

RoadNetwork random_network(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> people(100, 5000);
  std::vector<NodeSpec> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i].x = u(rng);
    nodes[i].y = u(rng);
    if (i % 4 == 0) {
      nodes[i].residents = people(rng);
      nodes[i].employees = people(rng);
    }
  }
  // Random spanning tree plus a few chords, all bidirectional.
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 1; i < n; ++i) {
    pairs.emplace_back(std::uniform_int_distribution<int>(0, static_cast<int>(i) - 1)(rng), static_cast<int>(i));
  }
  for (std::size_t c = 0; c < n / 3; ++c) {
    const int a = std::uniform_int_distribution<int>(0, static_cast<int>(n) - 1)(rng);
    const int b = std::uniform_int_distribution<int>(0, static_cast<int>(n) - 1)(rng);
    if (a == b) continue;
    bool dup = false;
    for (const auto& [x, y] : pairs) dup = dup || (x == a && y == b) || (x == b && y == a);
    if (!dup) pairs.emplace_back(a, b);
  }
  return make_bidirectional(nodes, pairs);
}

LineGraphSample random_sample(std::size_t num_nodes, std::size_t num_features, double edge_prob,
                              std::mt19937_64& rng, const std::string& graph_id) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LineGraphSample s;
  s.num_nodes = num_nodes;
  s.num_features = num_features;
  s.graph_id = graph_id;
  s.source_num_road_nodes = num_nodes;
  for (std::size_t i = 0; i < num_nodes * num_features; ++i) s.features.push_back(u(rng));
  for (std::size_t i = 0; i < num_nodes; ++i) {
    for (std::size_t j = 0; j < num_nodes; ++j) {
      if (i != j && u(rng) < edge_prob) s.edges.push_back({static_cast<int>(i), static_cast<int>(j)});
    }
    s.target_flow.push_back(1000.0 * u(rng));
  }
  return s;
}

LineGraphSample path_sample(std::size_t num_nodes, std::size_t num_features, std::mt19937_64& rng,
                            const std::string& graph_id) {
  LineGraphSample s = random_sample(num_nodes, num_features, 0.0, rng, graph_id);
  for (std::size_t i = 0; i + 1 < num_nodes; ++i) s.edges.push_back({static_cast<int>(i), static_cast<int>(i + 1)});
  return s;
}

Dataset make_dataset(std::vector<LineGraphSample> samples, Split split) {
  Dataset d;
  d.split = split;
  if (!samples.empty() && samples.front().num_features == line_graph_feature_schema().size()) {
    d.feature_schema = line_graph_feature_schema();
  } else if (!samples.empty()) {
    for (std::size_t c = 0; c < samples.front().num_features; ++c) d.feature_schema.push_back("f" + std::to_string(c));
  } else {
    d.feature_schema = line_graph_feature_schema();
  }
  d.samples = std::move(samples);
  return d;
}

ad::Tensor random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double lo, double hi,
                         bool requires_grad) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(rows * cols);
  for (double& x : v) x = u(rng);
  return ad::Tensor::matrix(rows, cols, std::move(v), requires_grad);
}

}  // namespace flowgnn::testing
