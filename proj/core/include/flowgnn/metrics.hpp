#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flowgnn/buckets.hpp"
#include "flowgnn/dataset_io.hpp"

namespace flowgnn::eval {

// Flows below this (veh/h, true value) are excluded from MAE and R^2.
inline constexpr double kFlowThreshold = 10.0;

struct ClassificationMetrics {
  double accuracy = 0.0;
  std::vector<double> per_class_f1;
  double macro_f1 = 0.0;
};

// Per-class F1 = 2PR/(P+R), 0 when P+R = 0; macro F1 is the unweighted mean
// over all num_classes classes, absent ones included.
ClassificationMetrics classification_metrics(std::span<const int> truth, std::span<const int> pred,
                                             std::size_t num_classes);

struct RegressionMetrics {
  double mae = 0.0;
  double r2 = 0.0;      // clipped below at 0 for reporting
  double r2_raw = 0.0;  // 1 - SSE/SST, unclipped
  std::size_t count = 0;
};

// MAE and R^2 over the links whose true flow is >= kFlowThreshold.
// Throws DomainError when no link survives the filter.
RegressionMetrics evaluate_regression(std::span<const double> predictions,
                                      std::span<const double> targets);

struct LinkPrediction {
  std::string graph_id;
  std::size_t link = 0;
  double target = 0.0;
  double predicted = 0.0;
  int true_class = -1;
  int predicted_class = -1;
};

struct GraphError {
  std::string graph_id;
  std::size_t num_nodes = 0;  // road nodes of the source network
  double mae = 0.0;           // over links with true flow >= threshold
};

struct MetricsReport {
  std::optional<ClassificationMetrics> classification;
  RegressionMetrics regression;  // count == 0 when no link reaches the threshold
  std::vector<GraphError> per_graph;
  std::vector<LinkPrediction> links;
};

// Builds a report from per-sample flow predictions, plus class predictions
// when `spec` is given (classification).
MetricsReport make_report(const Dataset& dataset, const std::vector<std::vector<double>>& flows,
                          const std::vector<std::vector<int>>* classes, const BucketSpec* spec);

}  // namespace flowgnn::eval
