#include "flowgnn/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "flowgnn/errors.hpp"
#include "flowgnn/optim.hpp"

namespace flowgnn::eval {

using gnn::MessageGraph;
using gnn::SurrogateModel;
using gnn::Task;

void TrainConfig::validate() const {
  if (epochs < 1) throw DomainError("epochs must be at least 1");
  if (!(learning_rate > 0.0)) throw DomainError("learning rate must be positive");
  if (task == Task::kClassification) buckets.validate();
}

namespace {

// Everything a step needs that does not change across epochs.
struct PreparedSample {
  const LineGraphSample* sample;
  MessageGraph graph;
  std::vector<int> labels;
  std::vector<double> scaled_targets;
};

std::vector<PreparedSample> prepare(const Dataset& dataset, const SurrogateModel& model,
                                    const TrainConfig& config) {
  std::vector<PreparedSample> out;
  out.reserve(dataset.samples.size());
  for (const LineGraphSample& s : dataset.samples) {
    if (s.num_features != model.config().num_features) {
      throw SchemaError("sample " + s.graph_id + " has " + std::to_string(s.num_features) +
                        " features, model expects " + std::to_string(model.config().num_features));
    }
    PreparedSample p{&s, MessageGraph::from_edges(s.num_nodes, s.edges), {}, {}};
    if (config.task == Task::kClassification) {
      for (double t : s.target_flow) p.labels.push_back(static_cast<int>(encode(t, config.buckets)));
    } else {
      for (double t : s.target_flow) p.scaled_targets.push_back(t / model.config().target_scale);
    }
    out.push_back(std::move(p));
  }
  return out;
}

ad::Tensor loss_of(ad::Tape& tape, const ad::Tensor& out, const PreparedSample& p, Task task) {
  return task == Task::kClassification ? ad::cross_entropy_loss(tape, out, p.labels)
                                       : ad::mse_loss(tape, out, p.scaled_targets);
}

struct Validation {
  double loss = 0.0;
  double metric = 0.0;
};

Validation validate_on(const SurrogateModel& model, const std::vector<PreparedSample>& prepared,
                       const std::vector<std::size_t>& order, const TrainConfig& config) {
  Validation v;
  gnn::Rng rng(0);
  std::vector<int> truth;
  std::vector<int> pred;
  std::vector<double> flow_pred;
  std::vector<double> flow_true;
  for (std::size_t idx : order) {
    const PreparedSample& p = prepared[idx];
    ad::Tape tape(false);
    const ad::Tensor out = model.forward(tape, *p.sample, p.graph, false, rng);
    v.loss += loss_of(tape, out, p, config.task).item();
    if (config.task == Task::kClassification) {
      const std::size_t c = out.cols();
      for (std::size_t r = 0; r < out.rows(); ++r) {
        const auto row = out.values().subspan(r * c, c);
        pred.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
      }
      truth.insert(truth.end(), p.labels.begin(), p.labels.end());
    } else {
      for (double y : out.values()) flow_pred.push_back(y * model.config().target_scale);
      flow_true.insert(flow_true.end(), p.sample->target_flow.begin(), p.sample->target_flow.end());
    }
  }
  v.loss /= static_cast<double>(order.size());
  if (config.task == Task::kClassification) {
    v.metric = classification_metrics(truth, pred, config.buckets.size()).macro_f1;
  } else if (std::any_of(flow_true.begin(), flow_true.end(), [](double t) { return t >= kFlowThreshold; })) {
    v.metric = evaluate_regression(flow_pred, flow_true).mae;
  }
  return v;
}

std::vector<std::size_t> graph_id_order(const Dataset& dataset) {
  std::vector<std::size_t> order(dataset.samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dataset.samples[a].graph_id < dataset.samples[b].graph_id;
  });
  return order;
}

void check_model_matches(const SurrogateModel& model, const TrainConfig& config) {
  if (model.config().task != config.task) throw SchemaError("model task differs from training task");
  if (config.task == Task::kClassification && model.config().num_outputs != config.buckets.size()) {
    throw SchemaError("model has " + std::to_string(model.config().num_outputs) + " outputs for " +
                      std::to_string(config.buckets.size()) + " buckets");
  }
}

}  // namespace

TrainResult train(SurrogateModel& model, const Dataset& train_set, const Dataset& val_set,
                  const TrainConfig& config) {
  config.validate();
  check_model_matches(model, config);
  if (train_set.samples.empty()) throw DomainError("training set is empty");
  if (!val_set.samples.empty() && val_set.feature_schema != train_set.feature_schema) {
    throw SchemaError("training and validation feature schemas differ");
  }
  model.set_scaler(gnn::FeatureScaler::fit(train_set));

  const std::vector<PreparedSample> train_prep = prepare(train_set, model, config);
  const std::vector<PreparedSample> val_prep = prepare(val_set, model, config);
  const std::vector<std::size_t> val_order = graph_id_order(val_set);

  std::vector<ad::Tensor> params = model.parameters();
  ad::Adam optimizer(params, {config.learning_rate});
  gnn::Rng rng(config.seed);
  std::vector<std::size_t> order(train_prep.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  result.best_val_loss = std::numeric_limits<double>::infinity();
  SurrogateModel best = model.clone();

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (std::size_t idx : order) {
      const PreparedSample& p = train_prep[idx];
      ad::Tape tape;
      const ad::Tensor out = model.forward(tape, *p.sample, p.graph, true, rng);
      const ad::Tensor loss = loss_of(tape, out, p, config.task);
      if (!std::isfinite(loss.item())) {
        throw DivergenceError("non-finite loss at epoch " + std::to_string(epoch) + " on " +
                              p.sample->graph_id);
      }
      total += loss.item();
      optimizer.zero_grad();
      tape.backward(loss);
      optimizer.step();
    }

    EpochRecord rec{epoch, total / static_cast<double>(order.size()), 0.0, 0.0};
    if (!val_prep.empty()) {
      const Validation v = validate_on(model, val_prep, val_order, config);
      rec.val_loss = v.loss;
      rec.val_metric = v.metric;
    } else {
      rec.val_loss = rec.train_loss;
    }
    result.curves.push_back(rec);

    if (rec.val_loss < result.best_val_loss) {
      result.best_val_loss = rec.val_loss;
      result.best_epoch = epoch;
      best.copy_parameters_from(model);
    } else if (config.patience > 0 && epoch - result.best_epoch >= config.patience) {
      result.stopped_early = true;
      break;
    }
  }
  model.copy_parameters_from(best);
  return result;
}

double dataset_loss(const SurrogateModel& model, const Dataset& dataset, const TrainConfig& config) {
  if (dataset.samples.empty()) throw DomainError("cannot compute the loss of an empty dataset");
  check_model_matches(model, config);
  const std::vector<PreparedSample> prep = prepare(dataset, model, config);
  return validate_on(model, prep, graph_id_order(dataset), config).loss;
}

std::vector<std::vector<double>> predict_probabilities(const SurrogateModel& model,
                                                       const LineGraphSample& sample) {
  if (model.config().task != Task::kClassification) {
    throw DomainError("probabilities need a classification model");
  }
  ad::Tape tape(false);
  gnn::Rng rng(0);
  const ad::Tensor probs = ad::row_softmax(tape, model.forward(tape, sample, false, rng));
  std::vector<std::vector<double>> out(probs.rows());
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    const auto row = probs.values().subspan(r * probs.cols(), probs.cols());
    out[r].assign(row.begin(), row.end());
  }
  return out;
}

std::vector<int> predict_classes(const SurrogateModel& model, const LineGraphSample& sample) {
  std::vector<int> out;
  for (const auto& row : predict_probabilities(model, sample)) {
    out.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
  }
  return out;
}

std::vector<double> classification_to_flow(const SurrogateModel& model,
                                           const LineGraphSample& sample, const BucketSpec& spec) {
  if (model.config().num_outputs != spec.size()) {
    throw SchemaError("model output count does not match bucket spec " + spec.name);
  }
  std::vector<double> out;
  for (const auto& row : predict_probabilities(model, sample)) out.push_back(decode_expectation(row, spec));
  return out;
}

std::vector<double> predict_flow(const SurrogateModel& model, const LineGraphSample& sample,
                                 const BucketSpec& spec) {
  if (model.config().task == Task::kClassification) return classification_to_flow(model, sample, spec);
  ad::Tape tape(false);
  gnn::Rng rng(0);
  const ad::Tensor out = model.forward(tape, sample, false, rng);
  std::vector<double> flows(out.values().begin(), out.values().end());
  for (double& f : flows) f *= model.config().target_scale;
  return flows;
}

MetricsReport evaluate_classification(const SurrogateModel& model, const Dataset& dataset,
                                      const BucketSpec& spec) {
  if (dataset.samples.empty()) throw DomainError("cannot evaluate an empty dataset");
  std::vector<std::vector<double>> flows;
  std::vector<std::vector<int>> classes;
  for (const LineGraphSample& s : dataset.samples) {
    const auto probs = predict_probabilities(model, s);
    std::vector<double> f;
    std::vector<int> c;
    for (const auto& row : probs) {
      f.push_back(decode_expectation(row, spec));
      c.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
    }
    flows.push_back(std::move(f));
    classes.push_back(std::move(c));
  }
  return make_report(dataset, flows, &classes, &spec);
}

MetricsReport evaluate_regression_model(const SurrogateModel& model, const Dataset& dataset) {
  if (dataset.samples.empty()) throw DomainError("cannot evaluate an empty dataset");
  std::vector<std::vector<double>> flows;
  const BucketSpec unused = make_spec("coarse3");
  for (const LineGraphSample& s : dataset.samples) flows.push_back(predict_flow(model, s, unused));
  return make_report(dataset, flows, nullptr, nullptr);
}

MetricsReport evaluate_model(const SurrogateModel& model, const Dataset& dataset,
                             const BucketSpec& spec) {
  return model.config().task == Task::kClassification ? evaluate_classification(model, dataset, spec)
                                                      : evaluate_regression_model(model, dataset);
}

}  // namespace flowgnn::eval
