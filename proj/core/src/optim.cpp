#include "flowgnn/optim.hpp"

#include <cmath>

#include "flowgnn/errors.hpp"

namespace flowgnn::ad {

void adam_step(std::vector<Tensor>& params, AdamState& state, const AdamOptions& options) {
  if (state.slots.empty()) {
    state.slots.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      state.slots[i].m.assign(params[i].numel(), 0.0);
      state.slots[i].v.assign(params[i].numel(), 0.0);
    }
  }
  if (state.slots.size() != params.size()) throw DimensionError("Adam state does not match parameters");
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(options.beta1, t);
  const double c2 = 1.0 - std::pow(options.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& p = params[i];
    if (!p.requires_grad()) continue;
    AdamSlot& slot = state.slots[i];
    if (slot.m.size() != p.numel()) throw DimensionError("Adam slot does not match parameter");
    auto value = p.mutable_values();
    auto grad = p.grad();
    for (std::size_t j = 0; j < value.size(); ++j) {
      const double g = grad[j];
      slot.m[j] = options.beta1 * slot.m[j] + (1.0 - options.beta1) * g;
      slot.v[j] = options.beta2 * slot.v[j] + (1.0 - options.beta2) * g * g;
      const double m_hat = slot.m[j] / c1;
      const double v_hat = slot.v[j] / c2;
      value[j] -= options.lr * m_hat / (std::sqrt(v_hat) + options.eps);
    }
  }
}

void Adam::zero_grad() {
  for (Tensor& p : params_) p.zero_grad();
}

}  // namespace flowgnn::ad
