#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace flowgnn {

// Coordinates are unitless in [0,1]; lengths derive from this scale.
inline constexpr double kRegionScaleKm = 30.0;

struct ZoneInfo {
  std::int64_t residents = 0;
  std::int64_t employees = 0;

  friend bool operator==(const ZoneInfo&, const ZoneInfo&) = default;
};

struct RoadNode {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  std::optional<ZoneInfo> zone;

  friend bool operator==(const RoadNode&, const RoadNode&) = default;
};

struct RoadLink {
  int id = 0;
  int from = 0;
  int to = 0;
  double length_km = 0.0;
  double capacity = 0.0;         // veh/h
  double free_flow_speed = 0.0;  // km/h

  double free_flow_minutes() const { return length_km / free_flow_speed * 60.0; }

  friend bool operator==(const RoadLink&, const RoadLink&) = default;
};

// Planar directed road graph. Node and link ids equal their positions.
struct RoadNetwork {
  std::vector<RoadNode> nodes;
  std::vector<RoadLink> links;

  // Throws ValidationError when an invariant is broken.
  void validate() const;

  std::vector<int> zone_nodes() const;

  friend bool operator==(const RoadNetwork&, const RoadNetwork&) = default;
};

struct GraphEdge {
  int src = 0;
  int dst = 0;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

// Link-level prediction graph: one node per directed road link, an edge
// (i, j) whenever traffic on link i can continue onto link j.
struct LineGraphSample {
  std::size_t num_nodes = 0;
  std::size_t num_features = 0;
  std::vector<double> features;  // row-major [num_nodes x num_features]
  std::vector<GraphEdge> edges;
  std::vector<double> target_flow;  // veh/h
  std::string graph_id;
  std::size_t source_num_road_nodes = 0;

  double feature(std::size_t node, std::size_t column) const {
    return features[node * num_features + column];
  }

  void validate() const;

  friend bool operator==(const LineGraphSample&, const LineGraphSample&) = default;
};

const std::vector<std::string>& line_graph_feature_schema();

LineGraphSample to_line_graph(const RoadNetwork& network, std::span<const double> flows,
                              std::string graph_id = {});

// Longest shortest hop path within the largest connected component, edges
// taken as undirected.
std::size_t graph_diameter(const LineGraphSample& sample);

}  // namespace flowgnn
