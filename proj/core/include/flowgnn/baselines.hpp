#pragma once

#include <cstddef>
#include <vector>

#include "flowgnn/buckets.hpp"
#include "flowgnn/dataset_io.hpp"
#include "flowgnn/metrics.hpp"
#include "flowgnn/model.hpp"
#include "flowgnn/train.hpp"

namespace flowgnn::eval {

// Predicts the most frequent training bucket (lowest index on ties).
struct MajorityClassifier {
  int bucket = 0;
  BucketSpec spec;

  static MajorityClassifier fit(const Dataset& train_set, const BucketSpec& spec);
  MetricsReport evaluate(const Dataset& dataset) const;
};

// Predicts the mean training flow everywhere.
struct MeanRegressor {
  double mean = 0.0;

  static MeanRegressor fit(const Dataset& train_set);
  MetricsReport evaluate(const Dataset& dataset) const;
};

// The same architecture with no graph layers: features only.
gnn::ModelConfig mlp_config(gnn::ModelConfig base);

struct TrainedModel {
  gnn::SurrogateModel model;
  TrainResult result;
};

TrainedModel mlp_baseline(const gnn::ModelConfig& base, const Dataset& train_set,
                          const Dataset& val_set, const TrainConfig& config,
                          std::uint64_t model_seed);

}  // namespace flowgnn::eval
