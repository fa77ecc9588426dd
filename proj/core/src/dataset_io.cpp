#include "flowgnn/dataset_io.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "flowgnn/errors.hpp"

namespace flowgnn {

using nlohmann::json;

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValidation:
      return "validation";
    case Split::kTest:
      return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "validation") return Split::kValidation;
  if (name == "test") return Split::kTest;
  throw DomainError("unknown split '" + std::string(name) + "'");
}

void Dataset::validate() const {
  std::set<std::string> ids;
  for (const LineGraphSample& s : samples) {
    if (s.num_features != feature_schema.size()) {
      throw SchemaError("sample " + s.graph_id + " has " + std::to_string(s.num_features) +
                        " features, schema has " + std::to_string(feature_schema.size()));
    }
    s.validate();
    if (!ids.insert(s.graph_id).second) {
      throw ValidationError("duplicate graph_id " + s.graph_id);
    }
  }
}

namespace {

json sample_to_json(const LineGraphSample& s) {
  json edges = json::array();
  for (const GraphEdge& e : s.edges) edges.push_back({e.src, e.dst});
  return json{{"graph_id", s.graph_id},
              {"num_nodes", s.num_nodes},
              {"features", s.features},
              {"edges", std::move(edges)},
              {"target_flow", s.target_flow},
              {"source_num_road_nodes", s.source_num_road_nodes}};
}

LineGraphSample sample_from_json(const json& j, std::size_t num_features) {
  LineGraphSample s;
  s.graph_id = j.at("graph_id").get<std::string>();
  s.num_nodes = j.at("num_nodes").get<std::size_t>();
  s.num_features = num_features;
  s.features = j.at("features").get<std::vector<double>>();
  for (const json& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("edge must be a pair");
    s.edges.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  s.target_flow = j.at("target_flow").get<std::vector<double>>();
  s.source_num_road_nodes = j.at("source_num_road_nodes").get<std::size_t>();
  return s;
}

}  // namespace

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  dataset.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const json header{{"feature_schema", dataset.feature_schema},
                    {"split", std::string(to_string(dataset.split))}};
  out << header.dump() << '\n';
  for (const LineGraphSample& s : dataset.samples) out << sample_to_json(s).dump() << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());

  Dataset dataset;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header line");
  ++line_no;
  try {
    const json header = json::parse(line);
    dataset.feature_schema = header.at("feature_schema").get<std::vector<std::string>>();
    dataset.split = parse_split(header.at("split").get<std::string>());
  } catch (const json::exception& e) {
    throw ParseError(line_no, e.what());
  } catch (const DomainError& e) {
    throw ParseError(line_no, e.what());
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    LineGraphSample s;
    try {
      s = sample_from_json(json::parse(line), dataset.feature_schema.size());
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    if (s.features.size() != s.num_nodes * dataset.feature_schema.size()) {
      throw SchemaError("line " + std::to_string(line_no) + ": sample " + s.graph_id +
                        " does not match the header feature schema");
    }
    dataset.samples.push_back(std::move(s));
  }
  dataset.validate();
  return dataset;
}

Dataset merge_datasets(const Dataset& base, const Dataset& extra) {
  if (base.feature_schema != extra.feature_schema) {
    throw SchemaError("cannot merge datasets with different feature schemas");
  }
  Dataset merged = base;
  merged.samples.insert(merged.samples.end(), extra.samples.begin(), extra.samples.end());
  merged.validate();
  return merged;
}

}  // namespace flowgnn
