#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "flowgnn/metrics.hpp"
#include "flowgnn/train.hpp"

namespace flowgnn::eval {

nlohmann::json report_to_json(const MetricsReport& report);
// Throws ParseError when required fields are missing or mistyped.
MetricsReport report_from_json(const nlohmann::json& j);

void write_report(const MetricsReport& report, const std::filesystem::path& path);
MetricsReport read_report(const std::filesystem::path& path);

// "graph_id,link,target,predicted,true_class,predicted_class" rows.
void write_predictions_csv(const MetricsReport& report, const std::filesystem::path& path);
// "epoch,train_loss,val_loss,val_metric" rows.
void write_curves_csv(const std::vector<EpochRecord>& curves, const std::filesystem::path& path);

}  // namespace flowgnn::eval
