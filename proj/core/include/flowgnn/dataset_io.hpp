#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "flowgnn/transport_graph.hpp"

namespace flowgnn {

enum class Split { kTrain, kValidation, kTest };

std::string_view to_string(Split split);
Split parse_split(std::string_view name);

struct Dataset {
  std::vector<LineGraphSample> samples;
  Split split = Split::kTrain;
  std::vector<std::string> feature_schema;

  // Schema agreement and per-sample invariants; throws SchemaError or
  // ValidationError.
  void validate() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// JSON-lines: a header object, then one object per sample.
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

// Training-set union used for the extra-data protocol. Schemas must match.
Dataset merge_datasets(const Dataset& base, const Dataset& extra);

}  // namespace flowgnn
