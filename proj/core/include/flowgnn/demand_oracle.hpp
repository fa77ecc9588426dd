#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "flowgnn/transport_graph.hpp"

// Single-mode four-step model used to label synthetic networks:
// trip generation, gravity distribution, incremental BPR assignment.
namespace flowgnn::oracle {

struct OracleParams {
  double production_rate = 0.5;  // trips per resident per hour
  double attraction_rate = 0.5;  // trips per employee per hour
  double gravity_beta = 0.05;    // 1/minute
  double bpr_alpha = 0.15;
  double bpr_beta = 4.0;
  int assignment_increments = 4;

  void validate() const;
};

// Dense row-major square matrix.
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t size, double fill = 0.0) : n(size), data(size * size, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * n + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * n + c]; }
};

struct TripTable {
  std::vector<double> productions;  // veh/h per zone
  std::vector<double> attractions;  // veh/h per zone
  SquareMatrix od;                  // veh/h
};

struct TripEnds {
  std::vector<double> productions;
  std::vector<double> attractions;
};

TripEnds trip_generation(std::span<const ZoneInfo> zones, const OracleParams& params);

TripTable gravity_distribution(std::span<const double> productions,
                               std::span<const double> attractions,
                               const SquareMatrix& travel_minutes, double beta);

double bpr_time(double t0, double volume, double capacity, const OracleParams& params);

// Shortest travel times (minutes) between every pair of the given nodes.
SquareMatrix zone_travel_times(const RoadNetwork& network, std::span<const int> zone_nodes,
                               std::span<const double> link_minutes);

// `od` is indexed by position in `zone_nodes`. Returns veh/h per link.
std::vector<double> incremental_assignment(const RoadNetwork& network,
                                           std::span<const int> zone_nodes,
                                           const SquareMatrix& od, const OracleParams& params);

LineGraphSample label_network(const RoadNetwork& network, const OracleParams& params,
                              std::string graph_id = {});

}  // namespace flowgnn::oracle
