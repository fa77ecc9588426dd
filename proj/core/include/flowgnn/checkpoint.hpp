#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flowgnn/model.hpp"

namespace flowgnn::gnn {

// Checkpoint layout:
//   line 1   UTF-8 JSON header terminated by '\n':
//            {"format": "flowgnn-checkpoint", "version": 1,
//             "config": {...}, "feature_schema": [...],
//             "scaler": {"mean": [...], "scale": [...]},
//             "parameters": [{"shape": [r, c]}, ...], "num_values": N}
//   rest     exactly N IEEE-754 float64 values, little-endian, parameters
//            concatenated in SurrogateModel::parameters() order, each
//            row-major.
struct Checkpoint {
  SurrogateModel model;
  std::vector<std::string> feature_schema;
};

nlohmann::json config_to_json(const ModelConfig& config);
ModelConfig config_from_json(const nlohmann::json& j);

void write_checkpoint(const SurrogateModel& model, const std::vector<std::string>& feature_schema,
                      const std::filesystem::path& path);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace flowgnn::gnn
