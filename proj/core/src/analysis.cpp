#include "flowgnn/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace flowgnn::eval {

SizeErrorAnalysis error_vs_graph_size(const MetricsReport& report) {
  std::vector<SizePoint> points;
  for (const GraphError& g : report.per_graph) {
    points.push_back({static_cast<double>(g.num_nodes), g.mae});
  }
  return error_vs_graph_size(std::move(points));
}

SizeErrorAnalysis error_vs_graph_size(std::vector<SizePoint> points) {
  SizeErrorAnalysis a;
  a.points = std::move(points);
  const double n = static_cast<double>(a.points.size());
  if (a.points.empty()) return a;
  double mx = 0.0, my = 0.0;
  for (const SizePoint& p : a.points) {
    mx += p.num_nodes;
    my += p.mae;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const SizePoint& p : a.points) {
    sxx += (p.num_nodes - mx) * (p.num_nodes - mx);
    syy += (p.mae - my) * (p.mae - my);
    sxy += (p.num_nodes - mx) * (p.mae - my);
  }
  a.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  a.intercept = my - a.slope * mx;
  a.correlation = sxx > 0.0 && syy > 0.0 ? std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0) : 0.0;
  return a;
}

}  // namespace flowgnn::eval
