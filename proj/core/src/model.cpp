#include "flowgnn/model.hpp"

#include <cmath>

#include "flowgnn/errors.hpp"

namespace flowgnn::gnn {

std::string_view to_string(Task task) {
  return task == Task::kClassification ? "cls" : "reg";
}

Task parse_task(std::string_view name) {
  if (name == "cls" || name == "classification") return Task::kClassification;
  if (name == "reg" || name == "regression") return Task::kRegression;
  throw DomainError("unknown task '" + std::string(name) + "'");
}

void ModelConfig::validate() const {
  if (hidden < 1) throw DomainError("hidden size must be positive");
  if (num_features < 1) throw DomainError("model needs at least one feature");
  if (task == Task::kRegression && num_outputs != 1) {
    throw DomainError("regression models have exactly one output");
  }
  if (task == Task::kClassification && num_outputs < 2) {
    throw DomainError("classification needs at least two classes");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) throw DomainError("dropout must lie in [0, 1)");
  if (heads < 1) throw DomainError("heads must be at least 1");
  if (!(target_scale > 0.0)) throw DomainError("target scale must be positive");
  if (depth > 0 && kind == LayerKind::kGcnii) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("GCNII alpha must lie in (0, 1)");
    if (!(theta > 0.0)) throw DomainError("GCNII theta must be positive");
  }
  if (depth > 0 && kind == LayerKind::kGatv3 && !(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("GATv3 alpha must lie in [0, 1]");
  }
}

ModelConfig gcnii_best_preset() {
  ModelConfig c;
  c.kind = LayerKind::kGcnii;
  c.depth = 70;
  c.hidden = 512;
  c.alpha = 0.1;
  c.theta = 1.5;
  return c;
}

ModelConfig gatv3_best_preset() {
  ModelConfig c;
  c.kind = LayerKind::kGatv3;
  c.depth = 20;
  c.hidden = 512;
  c.heads = 2;
  c.alpha = 0.1;
  return c;
}

FeatureScaler FeatureScaler::identity(std::size_t num_features) {
  return {std::vector<double>(num_features, 0.0), std::vector<double>(num_features, 1.0)};
}

FeatureScaler FeatureScaler::fit(const Dataset& dataset) {
  const std::size_t f = dataset.feature_schema.size();
  std::vector<double> sum(f, 0.0);
  std::vector<double> sq(f, 0.0);
  double rows = 0.0;
  for (const LineGraphSample& s : dataset.samples) {
    for (std::size_t r = 0; r < s.num_nodes; ++r) {
      for (std::size_t c = 0; c < f; ++c) {
        const double v = s.feature(r, c);
        sum[c] += v;
        sq[c] += v * v;
      }
    }
    rows += static_cast<double>(s.num_nodes);
  }
  FeatureScaler scaler = identity(f);
  if (rows == 0.0) return scaler;
  for (std::size_t c = 0; c < f; ++c) {
    scaler.mean[c] = sum[c] / rows;
    const double var = std::max(0.0, sq[c] / rows - scaler.mean[c] * scaler.mean[c]);
    scaler.scale[c] = var > 1e-12 ? std::sqrt(var) : 1.0;
  }
  return scaler;
}

Tensor FeatureScaler::transform(const LineGraphSample& sample) const {
  if (sample.num_features != mean.size()) {
    throw SchemaError("sample has " + std::to_string(sample.num_features) +
                      " features, model expects " + std::to_string(mean.size()));
  }
  std::vector<double> v(sample.features.size());
  const std::size_t f = sample.num_features;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (sample.features[i] - mean[i % f]) / scale[i % f];
  return Tensor::matrix(sample.num_nodes, f, std::move(v));
}

SurrogateModel::SurrogateModel(ModelConfig config, std::uint64_t seed)
    : config_(std::move(config)), scaler_(FeatureScaler::identity(config_.num_features)) {
  config_.validate();
  Rng rng(seed);
  const std::size_t h = config_.hidden;
  input_ = Linear::create(config_.num_features, h, rng);
  for (std::size_t l = 1; l <= config_.depth; ++l) {
    switch (config_.kind) {
      case LayerKind::kGcn:
        layers_.emplace_back(GcnLayer::create(h, rng));
        break;
      case LayerKind::kGcnii:
        layers_.emplace_back(GcniiLayer::create(h, config_.alpha, config_.theta, l, rng));
        break;
      case LayerKind::kGatv2:
        layers_.emplace_back(GatLayer::create(h, config_.heads, 0.0, false, rng));
        break;
      case LayerKind::kGatv3:
        layers_.emplace_back(GatLayer::create(h, config_.heads, config_.alpha, true, rng));
        break;
    }
    if (config_.graph_norm) {
      norms_.push_back({Tensor::from_values({1, h}, std::vector<double>(h, 1.0), true),
                        Tensor::from_values({1, h}, std::vector<double>(h, 1.0), true),
                        Tensor::zeros({1, h}, true)});
    }
  }
  for (std::size_t i = 0; i < config_.ff_layers; ++i) feed_forward_.push_back(Linear::create(h, h, rng));
  output_ = Linear::create(h, config_.num_outputs, rng);
}

void SurrogateModel::set_scaler(FeatureScaler scaler) {
  if (scaler.mean.size() != config_.num_features || scaler.scale.size() != config_.num_features) {
    throw SchemaError("scaler width does not match the model's feature count");
  }
  scaler_ = std::move(scaler);
}

Tensor SurrogateModel::forward(Tape& tape, const LineGraphSample& sample, bool training,
                               Rng& rng) const {
  const MessageGraph graph = MessageGraph::from_edges(sample.num_nodes, sample.edges);
  return forward(tape, sample, graph, training, rng);
}

Tensor SurrogateModel::forward(Tape& tape, const LineGraphSample& sample,
                               const MessageGraph& graph, bool training, Rng& rng) const {
  const Tensor features = scaler_.transform(sample);
  const Tensor x0 = ad::relu(tape, input_.forward(tape, features));
  Tensor x = x0;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    x = std::visit(
        [&](const auto& layer) -> Tensor {
          using L = std::decay_t<decltype(layer)>;
          if constexpr (std::is_same_v<L, GcnLayer>) {
            return layer.forward(tape, x, graph);
          } else {
            return layer.forward(tape, x, x0, graph);
          }
        },
        layers_[l]);
    if (config_.graph_norm) {
      const GraphNormParams& n = norms_[l];
      x = ad::graph_norm(tape, x, graph.graph_ids, 1, n.alpha, n.gamma, n.beta);
    }
    x = ad::dropout(tape, x, config_.dropout, training, rng);
  }
  for (const Linear& ff : feed_forward_) x = ad::add(tape, x, ad::relu(tape, ff.forward(tape, x)));
  return output_.forward(tape, x);
}

std::vector<Tensor> SurrogateModel::parameters() const {
  std::vector<Tensor> p{input_.weight, input_.bias};
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    std::visit(
        [&](const auto& layer) {
          using L = std::decay_t<decltype(layer)>;
          if constexpr (std::is_same_v<L, GatLayer>) {
            for (const auto& head : layer.heads) {
              p.push_back(head.weight);
              p.push_back(head.att_hidden);
              p.push_back(head.att_out);
            }
          } else {
            p.push_back(layer.weight);
          }
        },
        layers_[l]);
    if (config_.graph_norm) {
      p.push_back(norms_[l].alpha);
      p.push_back(norms_[l].gamma);
      p.push_back(norms_[l].beta);
    }
  }
  for (const Linear& ff : feed_forward_) {
    p.push_back(ff.weight);
    p.push_back(ff.bias);
  }
  p.push_back(output_.weight);
  p.push_back(output_.bias);
  return p;
}

std::size_t SurrogateModel::parameter_count() const {
  std::size_t n = 0;
  for (const Tensor& t : parameters()) n += t.numel();
  return n;
}

SurrogateModel SurrogateModel::clone() const {
  SurrogateModel copy(config_, 0);
  copy.scaler_ = scaler_;
  copy.copy_parameters_from(*this);
  return copy;
}

void SurrogateModel::copy_parameters_from(const SurrogateModel& other) {
  std::vector<Tensor> mine = parameters();
  const std::vector<Tensor> theirs = other.parameters();
  if (mine.size() != theirs.size()) throw DimensionError("models have different parameter lists");
  for (std::size_t i = 0; i < mine.size(); ++i) {
    if (mine[i].shape() != theirs[i].shape()) throw DimensionError("parameter shape mismatch");
    std::copy(theirs[i].values().begin(), theirs[i].values().end(), mine[i].mutable_values().begin());
  }
  scaler_ = other.scaler_;
}

}  // namespace flowgnn::gnn
