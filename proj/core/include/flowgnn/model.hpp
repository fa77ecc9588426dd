#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "flowgnn/dataset_io.hpp"
#include "flowgnn/layers.hpp"

namespace flowgnn::gnn {

enum class Task { kClassification, kRegression };

std::string_view to_string(Task task);
Task parse_task(std::string_view name);

struct ModelConfig {
  LayerKind kind = LayerKind::kGcnii;
  std::size_t depth = 10;  // 0 turns the model into a per-link MLP
  std::size_t hidden = 64;
  double alpha = 0.1;  // GCNII / GATv3 initial-residual strength
  double theta = 1.5;  // GCNII identity-mapping strength
  std::size_t heads = 1;
  std::size_t num_features = 9;
  std::size_t num_outputs = 3;  // bucket count, or 1 for regression
  Task task = Task::kClassification;
  std::string buckets = "coarse3";
  double dropout = 0.25;
  std::size_t ff_layers = 3;
  bool graph_norm = true;
  double target_scale = 1000.0;  // regression outputs are flow / target_scale

  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Named presets of the best configurations reported for full-scale runs.
ModelConfig gcnii_best_preset();
ModelConfig gatv3_best_preset();

// Column standardisation fitted on a training set.
struct FeatureScaler {
  std::vector<double> mean;
  std::vector<double> scale;

  static FeatureScaler identity(std::size_t num_features);
  static FeatureScaler fit(const Dataset& dataset);
  Tensor transform(const LineGraphSample& sample) const;

  friend bool operator==(const FeatureScaler&, const FeatureScaler&) = default;
};

struct GraphNormParams {
  Tensor alpha;
  Tensor gamma;
  Tensor beta;
};

using GraphLayer = std::variant<GcnLayer, GcniiLayer, GatLayer>;

// input projection -> depth x (graph layer, GraphNorm, dropout)
//   -> residual feed-forward head (x <- x + relu(x W + b)) -> output layer.
class SurrogateModel {
 public:
  SurrogateModel(ModelConfig config, std::uint64_t seed);
  // Parameters are shared handles; use clone() for an independent copy.
  SurrogateModel(const SurrogateModel&) = delete;
  SurrogateModel& operator=(const SurrogateModel&) = delete;
  SurrogateModel(SurrogateModel&&) = default;
  SurrogateModel& operator=(SurrogateModel&&) = default;

  const ModelConfig& config() const { return config_; }
  const FeatureScaler& scaler() const { return scaler_; }
  void set_scaler(FeatureScaler scaler);

  // [N x num_outputs] logits (classification) or scaled flows (regression).
  // Deterministic when !training. Throws SchemaError on a feature mismatch.
  Tensor forward(Tape& tape, const LineGraphSample& sample, bool training, Rng& rng) const;
  Tensor forward(Tape& tape, const LineGraphSample& sample, const MessageGraph& graph,
                 bool training, Rng& rng) const;

  // Every trainable tensor, in declaration order (the checkpoint order).
  std::vector<Tensor> parameters() const;
  std::size_t parameter_count() const;

  // Deep copy with independent parameter storage.
  SurrogateModel clone() const;
  void copy_parameters_from(const SurrogateModel& other);

  const std::vector<GraphLayer>& layers() const { return layers_; }

 private:
  ModelConfig config_;
  FeatureScaler scaler_;
  Linear input_;
  std::vector<GraphLayer> layers_;
  std::vector<GraphNormParams> norms_;
  std::vector<Linear> feed_forward_;
  Linear output_;
};

}  // namespace flowgnn::gnn
