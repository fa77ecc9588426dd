#pragma once

#include <vector>

#include "flowgnn/metrics.hpp"

namespace flowgnn::eval {

struct SizePoint {
  double num_nodes = 0.0;
  double mae = 0.0;
};

struct SizeErrorAnalysis {
  std::vector<SizePoint> points;
  double slope = 0.0;        // least-squares MAE per additional road node
  double intercept = 0.0;
  double correlation = 0.0;  // Pearson; 0 when either variable is constant
};

SizeErrorAnalysis error_vs_graph_size(const MetricsReport& report);
SizeErrorAnalysis error_vs_graph_size(std::vector<SizePoint> points);

}  // namespace flowgnn::eval
