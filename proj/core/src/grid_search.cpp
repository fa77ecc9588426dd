#include "flowgnn/grid_search.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "flowgnn/errors.hpp"

namespace flowgnn::eval {

void GridSpec::validate() const {
  if (layers.empty() || hidden.empty() || alpha.empty() || theta.empty()) {
    throw DomainError("every grid dimension needs at least one value");
  }
}

std::vector<gnn::ModelConfig> GridSpec::expand(const gnn::ModelConfig& base) const {
  validate();
  std::vector<gnn::ModelConfig> out;
  for (std::size_t l : layers) {
    for (std::size_t h : hidden) {
      for (double a : alpha) {
        for (double t : theta) {
          gnn::ModelConfig c = base;
          c.depth = l;
          c.hidden = h;
          c.alpha = a;
          c.theta = t;
          out.push_back(c);
        }
      }
    }
  }
  return out;
}

std::vector<GridResult> grid_search(const gnn::ModelConfig& base, const GridSpec& grid,
                                    const Dataset& train_set, const Dataset& val_set,
                                    const TrainConfig& config, std::uint64_t model_seed,
                                    std::size_t workers) {
  if (val_set.samples.empty()) throw DomainError("grid search ranks runs on validation data, which is empty");
  const std::vector<gnn::ModelConfig> configs = grid.expand(base);
  std::vector<GridResult> results(configs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      GridResult& r = results[i];
      r.config = configs[i];
      try {
        auto model = std::make_shared<gnn::SurrogateModel>(configs[i], model_seed);
        r.training = train(*model, train_set, val_set, config);
        const MetricsReport report = evaluate_model(*model, val_set, config.buckets);
        r.score = config.task == gnn::Task::kClassification ? report.classification->macro_f1
                                                            : report.regression.mae;
        r.model = std::move(model);
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(configs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  const bool higher_is_better = config.task == gnn::Task::kClassification;
  std::stable_sort(results.begin(), results.end(), [&](const GridResult& a, const GridResult& b) {
    if (a.error.empty() != b.error.empty()) return a.error.empty();
    if (!a.error.empty()) return false;
    return higher_is_better ? a.score > b.score : a.score < b.score;
  });
  if (!results.empty() && results.front().error.empty()) results.front().best = true;
  return results;
}

}  // namespace flowgnn::eval
