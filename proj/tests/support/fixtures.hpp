#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "flowgnn/dataset_io.hpp"
#include "flowgnn/tensor.hpp"
#include "flowgnn/transport_graph.hpp"

namespace flowgnn::testing {

struct NodeSpec {
  double x = 0.0;
  double y = 0.0;
  std::int64_t residents = -1;  // -1: not a zone
  std::int64_t employees = 0;
};

// Directed links in the given order; length is the Euclidean distance times
// the region scale, capacity 800 veh/h, 50 km/h.
RoadNetwork make_network(const std::vector<NodeSpec>& nodes,
                         const std::vector<std::pair<int, int>>& links);

// As make_network, but every pair becomes two links (a->b, then b->a).
RoadNetwork make_bidirectional(const std::vector<NodeSpec>& nodes,
                               const std::vector<std::pair<int, int>>& pairs);

// Random connected road network with `n` nodes and a few zones.
RoadNetwork random_network(std::size_t n, std::mt19937_64& rng);

// Random sample with `num_features` uniform features, edges drawn with
// probability `edge_prob` (no self pairs), targets uniform in [0, 1000).
LineGraphSample random_sample(std::size_t num_nodes, std::size_t num_features, double edge_prob,
                              std::mt19937_64& rng, const std::string& graph_id = "g");

// Path graph 0 -> 1 -> ... -> n-1 with random features.
LineGraphSample path_sample(std::size_t num_nodes, std::size_t num_features, std::mt19937_64& rng,
                            const std::string& graph_id = "path");

Dataset make_dataset(std::vector<LineGraphSample> samples, Split split = Split::kTrain);

ad::Tensor random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double lo = -1.0,
                         double hi = 1.0, bool requires_grad = true);

}  // namespace flowgnn::testing
