#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "flowgnn/buckets.hpp"
#include "flowgnn/dataset_io.hpp"

namespace flowgnn::testing {

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Two-stage sampling: bucket ~ Categorical(probs), value ~ Uniform(bucket).
MonteCarloEstimate monte_carlo_decode(std::span<const double> probs, const BucketSpec& spec,
                                      std::size_t samples, std::mt19937_64& rng);

std::vector<double> random_probabilities(std::size_t k, std::mt19937_64& rng);

// Random strictly increasing edges starting at 0.
BucketSpec random_spec(std::mt19937_64& rng);

// Samples whose true flows fall into the given coarse3 classes in the exact
// proportions `fractions` (rounded to `num_links` links in total), spread
// over graphs of 10 links each.
Dataset class_split_dataset(const std::vector<double>& fractions, std::size_t num_links,
                            std::mt19937_64& rng);

}  // namespace flowgnn::testing

namespace flowgnn::testing {

// Long-range toy task on path-like line graphs: a path of `length` links with
// a few short side branches; links are zonal with a small probability (at
// least one per graph). Features are [is_zonal, noise]. The label of a link
// is its hop distance to the nearest zonal link, clamped to max_label; the
// target flow is label + 0.5 so that hop_spec(max_label) encodes it back.
struct HopTaskOptions {
  std::size_t min_length = 15;
  std::size_t max_length = 25;
  std::size_t max_label = 7;
  double zonal_probability = 0.05;
  std::size_t branches = 2;
};

BucketSpec hop_spec(std::size_t max_label);
Dataset hop_distance_dataset(std::size_t num_graphs, const HopTaskOptions& options,
                             std::mt19937_64& rng, const std::string& prefix, Split split);

}  // namespace flowgnn::testing
