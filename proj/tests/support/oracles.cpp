#include "oracles.hpp"

#include <cmath>
#include <numeric>

#include "fixtures.hpp"

namespace flowgnn::testing {

MonteCarloEstimate monte_carlo_decode(std::span<const double> probs, const BucketSpec& spec,
                                      std::size_t samples, std::mt19937_64& rng) {
  std::discrete_distribution<std::size_t> bucket(probs.begin(), probs.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sum = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t k = bucket(rng);
    const double v = spec.lower(k) + unit(rng) * (spec.upper(k) - spec.lower(k));
    sum += v;
    sq += v * v;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sq / n - mean * mean);
  return {mean, std::sqrt(var / n)};
}

std::vector<double> random_probabilities(std::size_t k, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(k);
  for (double& x : p) x = e(rng);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  return p;
}

BucketSpec random_spec(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(2, 40);
  std::uniform_real_distribution<double> width(1.0, 300.0);
  BucketSpec spec{"random", {0.0}};
  const int k = count(rng);
  for (int i = 0; i < k; ++i) spec.edges.push_back(spec.edges.back() + width(rng));
  return spec;
}

Dataset class_split_dataset(const std::vector<double>& fractions, std::size_t num_links,
                            std::mt19937_64& rng) {
  const BucketSpec spec = make_spec("coarse3");
  std::vector<double> flows;
  for (std::size_t c = 0; c < fractions.size(); ++c) {
    const auto count = static_cast<std::size_t>(std::llround(fractions[c] * static_cast<double>(num_links)));
    std::uniform_real_distribution<double> in_bucket(spec.lower(c), spec.upper(c));
    for (std::size_t i = 0; i < count; ++i) flows.push_back(in_bucket(rng));
  }
  std::shuffle(flows.begin(), flows.end(), rng);
  std::vector<LineGraphSample> samples;
  for (std::size_t start = 0; start < flows.size(); start += 10) {
    const std::size_t n = std::min<std::size_t>(10, flows.size() - start);
    LineGraphSample s = path_sample(n, 9, rng, "cls-" + std::to_string(samples.size() + 1000));
    s.target_flow.assign(flows.begin() + static_cast<std::ptrdiff_t>(start),
                         flows.begin() + static_cast<std::ptrdiff_t>(start + n));
    samples.push_back(std::move(s));
  }
  return make_dataset(std::move(samples));
}

}  // namespace flowgnn::testing

namespace flowgnn::testing {

BucketSpec hop_spec(std::size_t max_label) {
  BucketSpec spec{"hop", {}};
  for (std::size_t k = 0; k <= max_label + 1; ++k) spec.edges.push_back(static_cast<double>(k));
  return spec;
}

Dataset hop_distance_dataset(std::size_t num_graphs, const HopTaskOptions& options,
                             std::mt19937_64& rng, const std::string& prefix, Split split) {
  std::uniform_int_distribution<std::size_t> length(options.min_length, options.max_length);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<LineGraphSample> samples;
  for (std::size_t g = 0; g < num_graphs; ++g) {
    const std::size_t n_path = length(rng);
    LineGraphSample s;
    s.graph_id = prefix + std::to_string(g + 100000);
    std::vector<std::vector<int>> adj;
    auto add_node = [&] {
      adj.emplace_back();
      return static_cast<int>(adj.size() - 1);
    };
    auto link = [&](int a, int b) {
      s.edges.push_back({a, b});
      adj[a].push_back(b);
      adj[b].push_back(a);
    };
    for (std::size_t i = 0; i < n_path; ++i) {
      const int v = add_node();
      if (i > 0) link(v - 1, v);
    }
    for (std::size_t b = 0; b < options.branches; ++b) {
      const int at = static_cast<int>(rng() % n_path);
      const int v = add_node();
      link(v, at);
    }
    const std::size_t n = adj.size();
    std::vector<bool> zonal(n, false);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      zonal[i] = unit(rng) < options.zonal_probability;
      any = any || zonal[i];
    }
    if (!any) zonal[rng() % n] = true;

    // Multi-source BFS from the zonal links.
    std::vector<std::size_t> dist(n, n + 1);
    std::vector<int> queue;
    for (std::size_t i = 0; i < n; ++i) {
      if (zonal[i]) {
        dist[i] = 0;
        queue.push_back(static_cast<int>(i));
      }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (int w : adj[queue[head]]) {
        if (dist[w] > dist[queue[head]] + 1) {
          dist[w] = dist[queue[head]] + 1;
          queue.push_back(w);
        }
      }
    }
    s.num_nodes = n;
    s.num_features = 2;
    s.source_num_road_nodes = n + 1;
    for (std::size_t i = 0; i < n; ++i) {
      s.features.push_back(zonal[i] ? 1.0 : 0.0);
      s.features.push_back(unit(rng));
      s.target_flow.push_back(static_cast<double>(std::min(dist[i], options.max_label)) + 0.5);
    }
    samples.push_back(std::move(s));
  }
  return make_dataset(std::move(samples), split);
}

}  // namespace flowgnn::testing
