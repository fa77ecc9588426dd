#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "flowgnn/dataset_io.hpp"
#include "flowgnn/demand_oracle.hpp"
#include "flowgnn/synthgen.hpp"

// Batch generation of labelled samples and deterministic dataset splits.
namespace flowgnn {

struct BatchConfig {
  std::size_t samples = 100;
  std::size_t min_nodes = 15;
  std::size_t max_nodes = 80;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::size_t first_index = 0;  // index of the first sample, for graph ids
  synth::SynthConfig synth;     // target_nodes and seed are set per sample
  oracle::OracleParams oracle;

  void validate() const;
};

// "<seed>-<index>" zero-padded, so lexical order follows generation order.
std::string sample_graph_id(std::uint64_t seed, std::size_t index);

// Sample i depends only on (config, seed, i): its target node count is drawn
// uniformly from [min_nodes, max_nodes] with a seed derived from i.
LineGraphSample generate_labelled_sample(const BatchConfig& config, std::size_t index);

// Samples in index order, generated on config.workers threads.
std::vector<LineGraphSample> generate_batch(const BatchConfig& config);

struct SplitFractions {
  double train = 0.70;
  double validation = 0.15;
  double test = 0.15;

  void validate() const;
};

std::uint64_t fnv1a64(std::string_view text);

// Assigns a split from the (finalised) FNV-1a hash of the graph id alone.
Split split_for(std::string_view graph_id, const SplitFractions& fractions = {});

struct SplitDatasets {
  Dataset train;
  Dataset validation;
  Dataset test;
};

SplitDatasets split_samples(std::vector<LineGraphSample> samples,
                            const SplitFractions& fractions = {});

}  // namespace flowgnn
