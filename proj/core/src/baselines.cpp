#include "flowgnn/baselines.hpp"

#include <algorithm>

#include "flowgnn/errors.hpp"

namespace flowgnn::eval {

MajorityClassifier MajorityClassifier::fit(const Dataset& train_set, const BucketSpec& spec) {
  std::vector<std::size_t> counts(spec.size(), 0);
  std::size_t total = 0;
  for (const LineGraphSample& s : train_set.samples) {
    for (double t : s.target_flow) {
      ++counts[encode(t, spec)];
      ++total;
    }
  }
  if (total == 0) throw DomainError("majority classifier needs labelled training data");
  const auto best = std::max_element(counts.begin(), counts.end()) - counts.begin();
  return {static_cast<int>(best), spec};
}

MetricsReport MajorityClassifier::evaluate(const Dataset& dataset) const {
  std::vector<std::vector<double>> flows;
  std::vector<std::vector<int>> classes;
  for (const LineGraphSample& s : dataset.samples) {
    flows.emplace_back(s.num_nodes, spec.midpoint(static_cast<std::size_t>(bucket)));
    classes.emplace_back(s.num_nodes, bucket);
  }
  return make_report(dataset, flows, &classes, &spec);
}

MeanRegressor MeanRegressor::fit(const Dataset& train_set) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const LineGraphSample& s : train_set.samples) {
    for (double t : s.target_flow) sum += t;
    n += s.target_flow.size();
  }
  if (n == 0) throw DomainError("mean regressor needs labelled training data");
  return {sum / static_cast<double>(n)};
}

MetricsReport MeanRegressor::evaluate(const Dataset& dataset) const {
  std::vector<std::vector<double>> flows;
  for (const LineGraphSample& s : dataset.samples) flows.emplace_back(s.num_nodes, mean);
  return make_report(dataset, flows, nullptr, nullptr);
}

gnn::ModelConfig mlp_config(gnn::ModelConfig base) {
  base.depth = 0;
  return base;
}

TrainedModel mlp_baseline(const gnn::ModelConfig& base, const Dataset& train_set,
                          const Dataset& val_set, const TrainConfig& config,
                          std::uint64_t model_seed) {
  if (train_set.samples.empty()) throw DomainError("MLP baseline needs training data");
  gnn::SurrogateModel model(mlp_config(base), model_seed);
  TrainResult result = train(model, train_set, val_set, config);
  return {std::move(model), std::move(result)};
}

}  // namespace flowgnn::eval
