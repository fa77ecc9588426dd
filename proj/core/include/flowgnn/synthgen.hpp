#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "flowgnn/transport_graph.hpp"

// Procedural generation of synthetic road networks with zones.
namespace flowgnn::synth {

using Rng = std::mt19937_64;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

struct IntRange {
  std::int64_t min = 0;
  std::int64_t max = 0;
};

struct SynthConfig {
  std::size_t target_nodes = 30;
  double zones_per_node = 0.15;
  std::size_t route_lookahead_k = 7;
  double node_tolerance = 0.10;
  std::uint64_t seed = 0;
  IntRange residents_range{100, 5000};
  IntRange employees_range{50, 3000};
  double link_capacity = 800.0;       // veh/h
  double link_free_flow_speed = 50.0;  // km/h

  void validate() const;
};

// round(target_nodes * zones_per_node), at least 2 and at most target_nodes.
std::size_t zone_count(const SynthConfig& config);

// Undirected links stored as (min, max) index pairs.
using LinkSet = std::set<std::pair<int, int>>;
using ZoneMap = std::map<int, ZoneInfo>;

std::vector<Point> scatter_nodes(std::size_t n, Rng& rng);

// Greedy farthest-point sampling anchored at the point nearest (0.5, 0.5).
// Returned indices are sorted ascending.
std::vector<int> select_zonal_nodes(std::span<const Point> points, std::size_t m);

ZoneMap assign_zonal_attributes(std::span<const int> zone_indices, const SynthConfig& config,
                                Rng& rng);

// Walks from `from` towards `to`: among the k nearest unvisited points the
// one closest to the target is taken next. `blocked` nodes count as already
// visited. Throws RouteFailed when no unvisited candidate remains.
std::vector<int> greedy_route(std::span<const Point> points, int from, int to, std::size_t k,
                              std::span<const int> blocked = {});

// Origin drawn proportionally to residents, destination (a different zone)
// proportionally to employees.
std::pair<int, int> draw_route_endpoints(const ZoneMap& zones, Rng& rng);

LinkSet build_routes(std::span<const Point> points, const ZoneMap& zones, Rng& rng,
                     const SynthConfig& config);

// Joins every zone that is not in the main component by routing it to the
// nearest node already in that component. Throws SampleFailed.
LinkSet connect_orphans(std::span<const Point> points, const ZoneMap& zones, LinkSet links,
                        std::size_t k);

// Every point becomes a node; each undirected pair becomes two directed links.
RoadNetwork assemble_network(std::span<const Point> points, const ZoneMap& zones,
                             const LinkSet& links, const SynthConfig& config);

RoadNetwork prune_and_split(const RoadNetwork& network, std::size_t target_nodes,
                            double tolerance);

RoadNetwork generate_sample(const SynthConfig& config);

// Regenerates with derived seeds while SampleFailed is thrown.
RoadNetwork generate_sample_with_retries(const SynthConfig& config, int max_attempts = 16);

std::uint64_t splitmix64(std::uint64_t x);

bool is_weakly_connected(const RoadNetwork& network);

}  // namespace flowgnn::synth
