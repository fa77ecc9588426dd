#include "flowgnn/demand_oracle.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

#include "flowgnn/errors.hpp"

namespace flowgnn::oracle {

void OracleParams::validate() const {
  if (!(production_rate > 0.0) || !(attraction_rate > 0.0)) {
    throw DomainError("trip rates must be positive");
  }
  if (!(gravity_beta >= 0.0)) throw DomainError("gravity beta must be non-negative");
  if (!(bpr_alpha > 0.0) || !(bpr_beta > 0.0)) throw DomainError("BPR parameters must be positive");
  if (assignment_increments < 1) throw DomainError("assignment needs at least one increment");
}

TripEnds trip_generation(std::span<const ZoneInfo> zones, const OracleParams& params) {
  if (zones.size() < 2) throw DomainError("trip generation needs at least two zones");
  TripEnds ends;
  double total_p = 0.0;
  double total_a = 0.0;
  for (const ZoneInfo& z : zones) {
    ends.productions.push_back(params.production_rate * static_cast<double>(z.residents));
    ends.attractions.push_back(params.attraction_rate * static_cast<double>(z.employees));
    total_p += ends.productions.back();
    total_a += ends.attractions.back();
  }
  if (total_a <= 0.0) throw DomainError("no employees anywhere; attractions cannot be balanced");
  const double scale = total_p / total_a;
  for (double& a : ends.attractions) a *= scale;
  return ends;
}

TripTable gravity_distribution(std::span<const double> productions,
                               std::span<const double> attractions,
                               const SquareMatrix& travel_minutes, double beta) {
  const std::size_t n = productions.size();
  if (attractions.size() != n || travel_minutes.n != n) {
    throw DimensionError("gravity inputs have inconsistent sizes");
  }
  TripTable table;
  table.productions.assign(productions.begin(), productions.end());
  table.attractions.assign(attractions.begin(), attractions.end());
  table.od = SquareMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    double denom = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (travel_minutes(i, j) < 0.0) throw DomainError("negative travel time");
      denom += attractions[j] * std::exp(-beta * travel_minutes(i, j));
    }
    if (!(denom > 0.0)) {
      throw DomainError("gravity row " + std::to_string(i) + " has a zero denominator");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      table.od(i, j) =
          productions[i] * attractions[j] * std::exp(-beta * travel_minutes(i, j)) / denom;
    }
  }
  return table;
}

double bpr_time(double t0, double volume, double capacity, const OracleParams& params) {
  return t0 * (1.0 + params.bpr_alpha * std::pow(volume / capacity, params.bpr_beta));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ShortestPathTree {
  std::vector<double> dist;
  std::vector<int> pred_link;  // -1 at the root or when unreachable
};

// Dijkstra; equal-cost predecessors resolve to the lowest node id.
ShortestPathTree dijkstra(const RoadNetwork& net, const std::vector<std::vector<int>>& out_links,
                          std::span<const double> cost, int source) {
  ShortestPathTree tree{std::vector<double>(net.nodes.size(), kInf),
                        std::vector<int>(net.nodes.size(), -1)};
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  tree.dist[source] = 0.0;
  heap.emplace(0.0, source);
  std::vector<bool> done(net.nodes.size(), false);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = true;
    for (int li : out_links[u]) {
      const RoadLink& l = net.links[li];
      const double nd = d + cost[li];
      if (nd < tree.dist[l.to]) {
        tree.dist[l.to] = nd;
        tree.pred_link[l.to] = li;
        heap.emplace(nd, l.to);
      } else if (nd == tree.dist[l.to] && !done[l.to] && tree.pred_link[l.to] >= 0 &&
                 u < net.links[tree.pred_link[l.to]].from) {
        tree.pred_link[l.to] = li;
      }
    }
  }
  return tree;
}

std::vector<std::vector<int>> outgoing_links(const RoadNetwork& net) {
  std::vector<std::vector<int>> out(net.nodes.size());
  for (const RoadLink& l : net.links) out[l.from].push_back(l.id);
  return out;
}

}  // namespace

SquareMatrix zone_travel_times(const RoadNetwork& network, std::span<const int> zone_nodes,
                               std::span<const double> link_minutes) {
  const auto out = outgoing_links(network);
  SquareMatrix times(zone_nodes.size());
  for (std::size_t i = 0; i < zone_nodes.size(); ++i) {
    const ShortestPathTree tree = dijkstra(network, out, link_minutes, zone_nodes[i]);
    for (std::size_t j = 0; j < zone_nodes.size(); ++j) times(i, j) = tree.dist[zone_nodes[j]];
  }
  return times;
}

std::vector<double> incremental_assignment(const RoadNetwork& network,
                                           std::span<const int> zone_nodes,
                                           const SquareMatrix& od, const OracleParams& params) {
  params.validate();
  if (od.n != zone_nodes.size()) throw DimensionError("OD matrix does not match zone count");
  const auto out = outgoing_links(network);
  std::vector<double> volume(network.links.size(), 0.0);
  std::vector<double> t0(network.links.size());
  for (const RoadLink& l : network.links) t0[l.id] = l.free_flow_minutes();
  std::vector<double> cost = t0;
  const double fraction = 1.0 / params.assignment_increments;

  for (int step = 0; step < params.assignment_increments; ++step) {
    std::vector<double> added(network.links.size(), 0.0);
    for (std::size_t i = 0; i < zone_nodes.size(); ++i) {
      const ShortestPathTree tree = dijkstra(network, out, cost, zone_nodes[i]);
      for (std::size_t j = 0; j < zone_nodes.size(); ++j) {
        const double demand = od(i, j) * fraction;
        if (i == j || demand <= 0.0) continue;
        if (tree.dist[zone_nodes[j]] == kInf) {
          throw DomainError("zone node " + std::to_string(zone_nodes[j]) +
                            " unreachable from zone node " + std::to_string(zone_nodes[i]));
        }
        for (int node = zone_nodes[j]; node != zone_nodes[i];) {
          const int li = tree.pred_link[node];
          added[li] += demand;
          node = network.links[li].from;
        }
      }
    }
    for (const RoadLink& l : network.links) {
      volume[l.id] += added[l.id];
      cost[l.id] = bpr_time(t0[l.id], volume[l.id], l.capacity, params);
    }
  }
  return volume;
}

LineGraphSample label_network(const RoadNetwork& network, const OracleParams& params,
                              std::string graph_id) {
  try {
    params.validate();
    const std::vector<int> zone_nodes = network.zone_nodes();
    std::vector<ZoneInfo> zones;
    for (int id : zone_nodes) zones.push_back(*network.nodes[id].zone);
    const TripEnds ends = trip_generation(zones, params);

    std::vector<double> t0(network.links.size());
    for (const RoadLink& l : network.links) t0[l.id] = l.free_flow_minutes();
    const SquareMatrix times = zone_travel_times(network, zone_nodes, t0);
    const TripTable trips =
        gravity_distribution(ends.productions, ends.attractions, times, params.gravity_beta);
    const std::vector<double> flows = incremental_assignment(network, zone_nodes, trips.od, params);
    return to_line_graph(network, flows, std::move(graph_id));
  } catch (const DomainError& e) {
    throw SampleFailed(std::string("labelling failed: ") + e.what());
  } catch (const DimensionError& e) {
    throw SampleFailed(std::string("labelling failed: ") + e.what());
  }
}

}  // namespace flowgnn::oracle
