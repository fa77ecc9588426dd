#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gradcheck.hpp"

namespace flowgnn::testing {

struct GradientCase {
  std::string name;
  std::function<GradCheckResult(std::uint64_t seed)> run;
};

// One case per autodiff primitive and loss.
std::vector<GradientCase> primitive_gradient_cases();
// GCN, GCNII, GATv2 and GATv3 layers, parameters and inputs.
std::vector<GradientCase> layer_gradient_cases();
// Depth-2, H=4 surrogate models on 5-node graphs, one per layer type.
std::vector<GradientCase> model_gradient_cases();

inline constexpr double kGradTolerance = 1e-4;

}  // namespace flowgnn::testing
