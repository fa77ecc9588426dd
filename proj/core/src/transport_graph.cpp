#include "flowgnn/transport_graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "flowgnn/errors.hpp"

namespace flowgnn {

void RoadNetwork::validate() const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const RoadNode& n = nodes[i];
    if (n.id != static_cast<int>(i)) {
      throw ValidationError("node id " + std::to_string(n.id) + " at position " +
                            std::to_string(i));
    }
    if (!(n.x >= 0.0 && n.x <= 1.0 && n.y >= 0.0 && n.y <= 1.0)) {
      throw ValidationError("node " + std::to_string(i) + " outside the unit square");
    }
    if (n.zone) {
      if (n.zone->residents < 0 || n.zone->employees < 0 ||
          n.zone->residents + n.zone->employees <= 0) {
        throw ValidationError("zone " + std::to_string(i) + " has invalid attributes");
      }
    }
  }
  const int n_nodes = static_cast<int>(nodes.size());
  for (std::size_t i = 0; i < links.size(); ++i) {
    const RoadLink& l = links[i];
    if (l.id != static_cast<int>(i)) {
      throw ValidationError("link id " + std::to_string(l.id) + " at position " +
                            std::to_string(i));
    }
    if (l.from < 0 || l.from >= n_nodes || l.to < 0 || l.to >= n_nodes) {
      throw ValidationError("link " + std::to_string(i) + " references a missing node");
    }
    if (!(l.length_km > 0.0) || !(l.capacity > 0.0) || !(l.free_flow_speed > 0.0)) {
      throw ValidationError("link " + std::to_string(i) + " has non-positive attributes");
    }
  }
}

std::vector<int> RoadNetwork::zone_nodes() const {
  std::vector<int> out;
  for (const RoadNode& n : nodes) {
    if (n.zone) out.push_back(n.id);
  }
  return out;
}

void LineGraphSample::validate() const {
  if (features.size() != num_nodes * num_features) {
    throw DimensionError("feature matrix size does not match num_nodes x num_features");
  }
  if (target_flow.size() != num_nodes) {
    throw DimensionError("target_flow length does not match num_nodes");
  }
  for (double f : features) {
    if (!std::isfinite(f)) throw ValidationError("non-finite feature in " + graph_id);
  }
  for (double t : target_flow) {
    if (!std::isfinite(t) || t < 0.0) {
      throw ValidationError("invalid target flow in " + graph_id);
    }
  }
  for (const GraphEdge& e : edges) {
    if (e.src < 0 || e.dst < 0 || static_cast<std::size_t>(e.src) >= num_nodes ||
        static_cast<std::size_t>(e.dst) >= num_nodes) {
      throw ValidationError("edge endpoint out of range in " + graph_id);
    }
    if (e.src == e.dst) throw ValidationError("self edge in " + graph_id);
  }
}

const std::vector<std::string>& line_graph_feature_schema() {
  static const std::vector<std::string> schema = {
      "length_km",      "capacity",       "free_flow_speed",
      "tail_residents", "tail_employees", "head_residents",
      "head_employees", "tail_is_zone",   "head_is_zone"};
  return schema;
}

LineGraphSample to_line_graph(const RoadNetwork& network, std::span<const double> flows,
                              std::string graph_id) {
  if (flows.size() != network.links.size()) {
    throw DimensionError("flow vector has " + std::to_string(flows.size()) +
                         " entries for " + std::to_string(network.links.size()) + " links");
  }
  LineGraphSample sample;
  sample.graph_id = std::move(graph_id);
  sample.num_nodes = network.links.size();
  sample.num_features = line_graph_feature_schema().size();
  sample.source_num_road_nodes = network.nodes.size();
  sample.features.reserve(sample.num_nodes * sample.num_features);
  sample.target_flow.assign(flows.begin(), flows.end());

  for (const RoadLink& link : network.links) {
    const auto& tail = network.nodes[link.from].zone;
    const auto& head = network.nodes[link.to].zone;
    const double row[] = {
        link.length_km,
        link.capacity,
        link.free_flow_speed,
        tail ? static_cast<double>(tail->residents) : 0.0,
        tail ? static_cast<double>(tail->employees) : 0.0,
        head ? static_cast<double>(head->residents) : 0.0,
        head ? static_cast<double>(head->employees) : 0.0,
        tail ? 1.0 : 0.0,
        head ? 1.0 : 0.0,
    };
    sample.features.insert(sample.features.end(), std::begin(row), std::end(row));
  }

  // Outgoing links per road node, in link order.
  std::vector<std::vector<int>> outgoing(network.nodes.size());
  for (const RoadLink& link : network.links) outgoing[link.from].push_back(link.id);

  for (const RoadLink& in : network.links) {
    for (int next : outgoing[in.to]) {
      const RoadLink& out = network.links[next];
      if (out.to == in.from) continue;  // U-turn onto the reverse link
      if (next == in.id) continue;
      sample.edges.push_back({in.id, next});
    }
  }
  return sample;
}

std::size_t graph_diameter(const LineGraphSample& sample) {
  const std::size_t n = sample.num_nodes;
  if (n == 0) throw DomainError("diameter of an empty graph");

  std::vector<std::vector<int>> adj(n);
  for (const GraphEdge& e : sample.edges) {
    adj[e.src].push_back(e.dst);
    adj[e.dst].push_back(e.src);
  }

  std::vector<int> component(n, -1);
  std::vector<std::size_t> component_size;
  for (std::size_t s = 0; s < n; ++s) {
    if (component[s] >= 0) continue;
    const int c = static_cast<int>(component_size.size());
    std::size_t count = 0;
    std::queue<int> q;
    q.push(static_cast<int>(s));
    component[s] = c;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      ++count;
      for (int v : adj[u]) {
        if (component[v] < 0) {
          component[v] = c;
          q.push(v);
        }
      }
    }
    component_size.push_back(count);
  }
  const int largest = static_cast<int>(
      std::max_element(component_size.begin(), component_size.end()) - component_size.begin());

  std::size_t diameter = 0;
  std::vector<int> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (component[s] != largest) continue;
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<int> q;
    q.push(static_cast<int>(s));
    dist[s] = 0;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      diameter = std::max(diameter, static_cast<std::size_t>(dist[u]));
      for (int v : adj[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push(v);
        }
      }
    }
  }
  return diameter;
}

}  // namespace flowgnn
