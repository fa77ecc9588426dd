#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "flowgnn/buckets.hpp"
#include "flowgnn/dataset_io.hpp"
#include "flowgnn/metrics.hpp"
#include "flowgnn/model.hpp"

namespace flowgnn::eval {

struct TrainConfig {
  gnn::Task task = gnn::Task::kClassification;
  BucketSpec buckets = make_spec("coarse3");  // classification targets
  std::size_t epochs = 300;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  std::size_t patience = 50;  // epochs without validation-loss improvement

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_metric = 0.0;  // macro F1 (classification) or MAE>=10 (regression)
};

struct TrainResult {
  std::vector<EpochRecord> curves;
  std::size_t best_epoch = 0;
  double best_val_loss = 0.0;
  bool stopped_early = false;
};

// One full-graph Adam step per training sample, samples shuffled each epoch.
// Fits the model's feature scaler on `train_set` first and leaves the model
// holding the parameters of the best validation-loss epoch.
// Throws DivergenceError on a non-finite loss and SchemaError when the
// datasets do not match the model.
TrainResult train(gnn::SurrogateModel& model, const Dataset& train_set, const Dataset& val_set,
                  const TrainConfig& config);

// Mean loss of the model over a dataset, samples visited in graph_id order.
double dataset_loss(const gnn::SurrogateModel& model, const Dataset& dataset,
                    const TrainConfig& config);

std::vector<std::vector<double>> predict_probabilities(const gnn::SurrogateModel& model,
                                                       const LineGraphSample& sample);
std::vector<int> predict_classes(const gnn::SurrogateModel& model, const LineGraphSample& sample);

// softmax -> expectation decoding, per link.
std::vector<double> classification_to_flow(const gnn::SurrogateModel& model,
                                           const LineGraphSample& sample, const BucketSpec& spec);

// veh/h per link for either task.
std::vector<double> predict_flow(const gnn::SurrogateModel& model, const LineGraphSample& sample,
                                 const BucketSpec& spec);

MetricsReport evaluate_classification(const gnn::SurrogateModel& model, const Dataset& dataset,
                                      const BucketSpec& spec);
MetricsReport evaluate_regression_model(const gnn::SurrogateModel& model, const Dataset& dataset);
MetricsReport evaluate_model(const gnn::SurrogateModel& model, const Dataset& dataset,
                             const BucketSpec& spec);

}  // namespace flowgnn::eval
