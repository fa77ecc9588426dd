#include "flowgnn/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "flowgnn/errors.hpp"

namespace flowgnn::eval {

ClassificationMetrics classification_metrics(std::span<const int> truth, std::span<const int> pred,
                                             std::size_t num_classes) {
  if (truth.size() != pred.size()) throw DimensionError("prediction count differs from truth");
  if (truth.empty()) throw DomainError("no predictions to score");
  std::vector<double> tp(num_classes, 0.0), fp(num_classes, 0.0), fn(num_classes, 0.0);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i];
    const int p = pred[i];
    if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= num_classes ||
        static_cast<std::size_t>(p) >= num_classes) {
      throw DomainError("class index outside [0, " + std::to_string(num_classes) + ")");
    }
    if (t == p) {
      ++correct;
      tp[t] += 1.0;
    } else {
      fp[p] += 1.0;
      fn[t] += 1.0;
    }
  }
  ClassificationMetrics m;
  m.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
  m.per_class_f1.resize(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    const double precision = tp[c] + fp[c] > 0.0 ? tp[c] / (tp[c] + fp[c]) : 0.0;
    const double recall = tp[c] + fn[c] > 0.0 ? tp[c] / (tp[c] + fn[c]) : 0.0;
    m.per_class_f1[c] =
        precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    m.macro_f1 += m.per_class_f1[c];
  }
  m.macro_f1 /= static_cast<double>(num_classes);
  return m;
}

RegressionMetrics evaluate_regression(std::span<const double> predictions,
                                      std::span<const double> targets) {
  if (predictions.size() != targets.size()) throw DimensionError("prediction count differs from targets");
  RegressionMetrics m;
  double target_sum = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < kFlowThreshold) continue;
    ++m.count;
    target_sum += targets[i];
    m.mae += std::abs(predictions[i] - targets[i]);
  }
  if (m.count == 0) throw DomainError("no link has a true flow of at least 10 veh/h");
  const double n = static_cast<double>(m.count);
  m.mae /= n;
  const double mean = target_sum / n;
  double sse = 0.0;
  double sst = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < kFlowThreshold) continue;
    sse += (predictions[i] - targets[i]) * (predictions[i] - targets[i]);
    sst += (targets[i] - mean) * (targets[i] - mean);
  }
  if (sst > 0.0) {
    m.r2_raw = 1.0 - sse / sst;
  } else {
    m.r2_raw = sse == 0.0 ? 1.0 : 0.0;
  }
  m.r2 = std::max(0.0, m.r2_raw);
  return m;
}

MetricsReport make_report(const Dataset& dataset, const std::vector<std::vector<double>>& flows,
                          const std::vector<std::vector<int>>* classes, const BucketSpec* spec) {
  if (flows.size() != dataset.samples.size()) throw DimensionError("one prediction vector per sample");
  if (dataset.samples.empty()) throw DomainError("cannot evaluate an empty dataset");
  MetricsReport report;
  std::vector<double> all_pred;
  std::vector<double> all_true;
  std::vector<int> true_cls;
  std::vector<int> pred_cls;

  for (std::size_t s = 0; s < dataset.samples.size(); ++s) {
    const LineGraphSample& sample = dataset.samples[s];
    if (flows[s].size() != sample.num_nodes) throw DimensionError("prediction length mismatch");
    double graph_err = 0.0;
    std::size_t graph_count = 0;
    for (std::size_t i = 0; i < sample.num_nodes; ++i) {
      LinkPrediction lp{sample.graph_id, i, sample.target_flow[i], flows[s][i], -1, -1};
      if (classes && spec) {
        lp.true_class = static_cast<int>(encode(sample.target_flow[i], *spec));
        lp.predicted_class = (*classes)[s][i];
        true_cls.push_back(lp.true_class);
        pred_cls.push_back(lp.predicted_class);
      }
      if (lp.target >= kFlowThreshold) {
        graph_err += std::abs(lp.predicted - lp.target);
        ++graph_count;
      }
      all_pred.push_back(lp.predicted);
      all_true.push_back(lp.target);
      report.links.push_back(std::move(lp));
    }
    if (graph_count > 0) {
      report.per_graph.push_back({sample.graph_id, sample.source_num_road_nodes,
                                  graph_err / static_cast<double>(graph_count)});
    }
  }
  if (classes && spec) report.classification = classification_metrics(true_cls, pred_cls, spec->size());
  if (std::any_of(all_true.begin(), all_true.end(), [](double t) { return t >= kFlowThreshold; })) {
    report.regression = evaluate_regression(all_pred, all_true);
  }
  return report;
}

}  // namespace flowgnn::eval
