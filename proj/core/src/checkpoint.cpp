#include "flowgnn/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "flowgnn/errors.hpp"

namespace flowgnn::gnn {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "flowgnn-checkpoint";
constexpr int kVersion = 1;

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xFFu) << (8 * (7 - i));
    return r;
  }
}

}  // namespace

json config_to_json(const ModelConfig& c) {
  return json{{"model", std::string(to_string(c.kind))},
              {"layers", c.depth},
              {"hidden", c.hidden},
              {"alpha", c.alpha},
              {"theta", c.theta},
              {"heads", c.heads},
              {"num_features", c.num_features},
              {"num_outputs", c.num_outputs},
              {"task", std::string(to_string(c.task))},
              {"buckets", c.buckets},
              {"dropout", c.dropout},
              {"ff_layers", c.ff_layers},
              {"graph_norm", c.graph_norm},
              {"target_scale", c.target_scale}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.kind = parse_layer_kind(j.at("model").get<std::string>());
  c.depth = j.at("layers").get<std::size_t>();
  c.hidden = j.at("hidden").get<std::size_t>();
  c.alpha = j.at("alpha").get<double>();
  c.theta = j.at("theta").get<double>();
  c.heads = j.at("heads").get<std::size_t>();
  c.num_features = j.at("num_features").get<std::size_t>();
  c.num_outputs = j.at("num_outputs").get<std::size_t>();
  c.task = parse_task(j.at("task").get<std::string>());
  c.buckets = j.at("buckets").get<std::string>();
  c.dropout = j.at("dropout").get<double>();
  c.ff_layers = j.at("ff_layers").get<std::size_t>();
  c.graph_norm = j.at("graph_norm").get<bool>();
  c.target_scale = j.at("target_scale").get<double>();
  return c;
}

void write_checkpoint(const SurrogateModel& model, const std::vector<std::string>& feature_schema,
                      const std::filesystem::path& path) {
  const std::vector<Tensor> params = model.parameters();
  json shapes = json::array();
  std::size_t total = 0;
  for (const Tensor& p : params) {
    shapes.push_back({{"shape", p.shape()}});
    total += p.numel();
  }
  const json header{{"format", kFormat},
                    {"version", kVersion},
                    {"config", config_to_json(model.config())},
                    {"feature_schema", feature_schema},
                    {"scaler", {{"mean", model.scaler().mean}, {"scale", model.scaler().scale}}},
                    {"parameters", std::move(shapes)},
                    {"num_values", total}};

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << header.dump() << '\n';
  for (const Tensor& p : params) {
    for (double v : p.values()) {
      const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
      out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  if (!out) throw Error("write failed for " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing checkpoint header");
  json header;
  ModelConfig config;
  try {
    header = json::parse(line);
    if (header.at("format").get<std::string>() != kFormat ||
        header.at("version").get<int>() != kVersion) {
      throw ParseError(1, "unsupported checkpoint format");
    }
    config = config_from_json(header.at("config"));
  } catch (const json::exception& e) {
    throw ParseError(1, e.what());
  }

  Checkpoint ck{SurrogateModel(config, 0),
                header.at("feature_schema").get<std::vector<std::string>>()};
  FeatureScaler scaler{header.at("scaler").at("mean").get<std::vector<double>>(),
                       header.at("scaler").at("scale").get<std::vector<double>>()};
  ck.model.set_scaler(std::move(scaler));

  std::vector<Tensor> params = ck.model.parameters();
  const json& shapes = header.at("parameters");
  if (shapes.size() != params.size()) {
    throw SchemaError("checkpoint lists " + std::to_string(shapes.size()) + " parameters, model has " +
                      std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (shapes[i].at("shape").get<ad::Shape>() != params[i].shape()) {
      throw SchemaError("parameter " + std::to_string(i) + " shape differs from architecture");
    }
    for (double& v : params[i].mutable_values()) {
      std::uint64_t bits = 0;
      if (!in.read(reinterpret_cast<char*>(&bits), sizeof bits)) {
        throw ParseError(2, "checkpoint parameter block is truncated");
      }
      v = std::bit_cast<double>(to_little_endian(bits));
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw ParseError(2, "trailing bytes after the parameter block");
  }
  return ck;
}

}  // namespace flowgnn::gnn
