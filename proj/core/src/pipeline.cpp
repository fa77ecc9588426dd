#include "flowgnn/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <thread>

#include "flowgnn/errors.hpp"

namespace flowgnn {

void BatchConfig::validate() const {
  if (samples == 0) throw DomainError("sample count must be positive");
  if (min_nodes < 5) throw DomainError("min_nodes must be at least 5");
  if (max_nodes < min_nodes) throw DomainError("max_nodes must not be below min_nodes");
  oracle.validate();
}

std::string sample_graph_id(std::uint64_t seed, std::size_t index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%llu-%06zu", static_cast<unsigned long long>(seed), index);
  return buf;
}

LineGraphSample generate_labelled_sample(const BatchConfig& config, std::size_t index) {
  const std::uint64_t sample_seed = synth::splitmix64(config.seed ^ synth::splitmix64(index));
  synth::Rng rng(sample_seed);
  synth::SynthConfig sc = config.synth;
  sc.target_nodes = std::uniform_int_distribution<std::size_t>(config.min_nodes, config.max_nodes)(rng);
  sc.seed = rng();
  const std::string id = sample_graph_id(config.seed, index);
  constexpr int kAttempts = 16;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    try {
      const RoadNetwork network = synth::generate_sample_with_retries(sc);
      return oracle::label_network(network, config.oracle, id);
    } catch (const SampleFailed&) {
      sc.seed = synth::splitmix64(sc.seed);
    }
  }
  throw SampleFailed("sample " + id + " could not be generated and labelled");
}

std::vector<LineGraphSample> generate_batch(const BatchConfig& config) {
  config.validate();
  std::vector<LineGraphSample> out(config.samples);
  std::vector<std::exception_ptr> errors(config.samples);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.samples; i = next++) {
      try {
        out[i] = generate_labelled_sample(config, config.first_index + i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t threads = std::min(std::max<std::size_t>(config.workers, 1), config.samples);
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

void SplitFractions::validate() const {
  if (train < 0.0 || validation < 0.0 || test < 0.0) throw DomainError("split fractions must be non-negative");
  if (std::abs(train + validation + test - 1.0) > 1e-9) throw DomainError("split fractions must sum to 1");
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Split split_for(std::string_view graph_id, const SplitFractions& fractions) {
  fractions.validate();
  // FNV-1a alone barely moves the high bits for ids differing in the last
  // character, so the hash is passed through a 64-bit finaliser.
  const double u = static_cast<double>(synth::splitmix64(fnv1a64(graph_id)) >> 11) * 0x1.0p-53;
  if (u < fractions.train) return Split::kTrain;
  if (u < fractions.train + fractions.validation) return Split::kValidation;
  return Split::kTest;
}

SplitDatasets split_samples(std::vector<LineGraphSample> samples, const SplitFractions& fractions) {
  SplitDatasets out;
  out.train.split = Split::kTrain;
  out.validation.split = Split::kValidation;
  out.test.split = Split::kTest;
  const std::vector<std::string> schema = line_graph_feature_schema();
  out.train.feature_schema = out.validation.feature_schema = out.test.feature_schema = schema;
  for (LineGraphSample& s : samples) {
    switch (split_for(s.graph_id, fractions)) {
      case Split::kTrain: out.train.samples.push_back(std::move(s)); break;
      case Split::kValidation: out.validation.samples.push_back(std::move(s)); break;
      case Split::kTest: out.test.samples.push_back(std::move(s)); break;
    }
  }
  return out;
}

}  // namespace flowgnn
