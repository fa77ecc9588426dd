#pragma once

#include <cstddef>
#include <vector>

#include "flowgnn/tensor.hpp"

namespace flowgnn::ad {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First and second moment estimates for one parameter.
struct AdamSlot {
  std::vector<double> m;
  std::vector<double> v;
};

struct AdamState {
  std::vector<AdamSlot> slots;
  std::size_t step = 0;
};

// One bias-corrected Adam update, reading each parameter's grad buffer.
// State slots are zero-initialised on first use.
void adam_step(std::vector<Tensor>& params, AdamState& state, const AdamOptions& options);

class Adam {
 public:
  Adam(std::vector<Tensor> params, AdamOptions options) : params_(std::move(params)), options_(options) {}

  void zero_grad();
  void step() { adam_step(params_, state_, options_); }

  const AdamState& state() const { return state_; }

 private:
  std::vector<Tensor> params_;
  AdamOptions options_;
  AdamState state_;
};

}  // namespace flowgnn::ad
