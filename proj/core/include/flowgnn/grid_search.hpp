#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "flowgnn/dataset_io.hpp"
#include "flowgnn/model.hpp"
#include "flowgnn/train.hpp"

namespace flowgnn::eval {

struct GridSpec {
  std::vector<std::size_t> layers;
  std::vector<std::size_t> hidden;
  std::vector<double> alpha;
  std::vector<double> theta;

  void validate() const;
  // Cartesian product applied over `base`, layers varying slowest.
  std::vector<gnn::ModelConfig> expand(const gnn::ModelConfig& base) const;
};

struct GridResult {
  gnn::ModelConfig config;
  double score = 0.0;  // validation macro F1 or validation MAE>=10
  bool best = false;
  std::string error;   // non-empty when the run failed
  TrainResult training;
  std::shared_ptr<gnn::SurrogateModel> model;
};

// Trains every grid point (on up to `workers` threads) and returns all
// results ranked best first: macro F1 descending for classification, MAE>=10
// ascending for regression. Failed runs are kept, ranked last.
// Throws DomainError when the validation set is empty.
std::vector<GridResult> grid_search(const gnn::ModelConfig& base, const GridSpec& grid,
                                    const Dataset& train_set, const Dataset& val_set,
                                    const TrainConfig& config, std::uint64_t model_seed,
                                    std::size_t workers = 1);

}  // namespace flowgnn::eval
