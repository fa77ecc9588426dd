#include "gradient_cases.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "flowgnn/layers.hpp"
#include "flowgnn/model.hpp"
#include "flowgnn/ops.hpp"

namespace flowgnn::testing {

namespace {

using ad::Tape;
using ad::Tensor;
using Rng = std::mt19937_64;

// Entries bounded away from the kinks of relu-like ops.
Tensor away_from_zero(std::size_t r, std::size_t c, Rng& rng) {
  Tensor t = random_matrix(r, c, rng);
  for (double& v : t.mutable_values()) {
    if (std::abs(v) < 0.05) v = v < 0 ? -0.5 : 0.5;
  }
  return t;
}

std::vector<int> random_ids(std::size_t n, int max_id, Rng& rng, bool cover_all) {
  std::vector<int> ids(n);
  std::uniform_int_distribution<int> d(0, max_id - 1);
  for (std::size_t i = 0; i < n; ++i) ids[i] = cover_all && i < static_cast<std::size_t>(max_id) ? static_cast<int>(i) : d(rng);
  std::shuffle(ids.begin(), ids.end(), rng);
  return ids;
}

GradientCase unary(const std::string& name, std::function<Tensor(Tape&, const Tensor&)> op, bool kinks) {
  return {name, [=](std::uint64_t seed) {
            Rng rng(seed);
            const Tensor a = kinks ? away_from_zero(4, 3, rng) : random_matrix(4, 3, rng);
            return grad_check([&](Tape& t) { return weighted_sum(t, op(t, a), seed); }, {a});
          }};
}

GradientCase binary(const std::string& name, std::function<Tensor(Tape&, const Tensor&, const Tensor&)> op,
                    std::size_t ar, std::size_t ac, std::size_t br, std::size_t bc) {
  return {name, [=](std::uint64_t seed) {
            Rng rng(seed);
            const Tensor a = random_matrix(ar, ac, rng);
            const Tensor b = random_matrix(br, bc, rng);
            return grad_check([&](Tape& t) { return weighted_sum(t, op(t, a, b), seed); }, {a, b});
          }};
}

}  // namespace

std::vector<GradientCase> primitive_gradient_cases() {
  std::vector<GradientCase> cases;
  cases.push_back(binary("matmul", [](Tape& t, const Tensor& a, const Tensor& b) { return ad::matmul(t, a, b); }, 4, 3, 3, 5));
  cases.push_back(binary("add", [](Tape& t, const Tensor& a, const Tensor& b) { return ad::add(t, a, b); }, 4, 3, 4, 3));
  cases.push_back(binary("sub", [](Tape& t, const Tensor& a, const Tensor& b) { return ad::sub(t, a, b); }, 4, 3, 4, 3));
  cases.push_back(binary("mul", [](Tape& t, const Tensor& a, const Tensor& b) { return ad::mul(t, a, b); }, 4, 3, 4, 3));
  cases.push_back(binary("add_bias", [](Tape& t, const Tensor& a, const Tensor& b) { return ad::add_bias(t, a, b); }, 4, 3, 1, 3));
  cases.push_back(binary("scale_rows", [](Tape& t, const Tensor& a, const Tensor& w) { return ad::scale_rows(t, a, w); }, 4, 3, 4, 1));
  cases.push_back(binary("concat_rows", [](Tape& t, const Tensor& a, const Tensor& b) { return ad::concat_rows(t, a, b); }, 4, 3, 4, 2));
  cases.push_back(unary("scalar_mul", [](Tape& t, const Tensor& a) { return ad::scalar_mul(t, a, -1.7); }, false));
  cases.push_back(unary("relu", [](Tape& t, const Tensor& a) { return ad::relu(t, a); }, true));
  cases.push_back(unary("leaky_relu", [](Tape& t, const Tensor& a) { return ad::leaky_relu(t, a, 0.2); }, true));
  cases.push_back(unary("row_softmax", [](Tape& t, const Tensor& a) { return ad::row_softmax(t, a); }, false));
  cases.push_back(unary("mean_rows", [](Tape& t, const Tensor& a) { return ad::mean_rows(t, a); }, false));
  cases.push_back(unary("sum", [](Tape& t, const Tensor& a) { return ad::sum(t, a); }, false));
  cases.push_back({"gather_rows", [](std::uint64_t seed) {
                     Rng rng(seed);
                     const Tensor a = random_matrix(4, 3, rng);
                     const ad::Index idx = ad::make_index(random_ids(7, 4, rng, false));
                     return grad_check([&](Tape& t) { return weighted_sum(t, ad::gather_rows(t, a, idx), seed); }, {a});
                   }});
  cases.push_back({"segment_sum", [](std::uint64_t seed) {
                     Rng rng(seed);
                     const Tensor a = random_matrix(7, 3, rng);
                     const ad::Index ids = ad::make_index(random_ids(7, 3, rng, true));
                     return grad_check([&](Tape& t) { return weighted_sum(t, ad::segment_sum(t, a, ids, 3), seed); }, {a});
                   }});
  cases.push_back({"segment_softmax", [](std::uint64_t seed) {
                     Rng rng(seed);
                     const Tensor a = random_matrix(8, 2, rng, -2.0, 2.0);
                     const ad::Index ids = ad::make_index(random_ids(8, 3, rng, true));
                     return grad_check([&](Tape& t) { return weighted_sum(t, ad::segment_softmax(t, a, ids, 3), seed); }, {a});
                   }});
  cases.push_back({"dropout", [](std::uint64_t seed) {
                     Rng rng(seed);
                     const Tensor a = random_matrix(6, 4, rng);
                     return grad_check(
                         [&](Tape& t) {
                           std::mt19937_64 mask_rng(seed + 99);
                           return weighted_sum(t, ad::dropout(t, a, 0.3, true, mask_rng), seed);
                         },
                         {a});
                   }});
  cases.push_back({"graph_norm", [](std::uint64_t seed) {
                     Rng rng(seed);
                     const Tensor x = random_matrix(7, 3, rng, -2.0, 2.0);
                     const ad::Index ids = ad::make_index({0, 0, 0, 1, 1, 1, 1});
                     const Tensor alpha = random_matrix(1, 3, rng, 0.2, 1.2);
                     const Tensor gamma = random_matrix(1, 3, rng, 0.5, 1.5);
                     const Tensor beta = random_matrix(1, 3, rng);
                     return grad_check(
                         [&](Tape& t) { return weighted_sum(t, ad::graph_norm(t, x, ids, 2, alpha, gamma, beta), seed); },
                         {x, alpha, gamma, beta});
                   }});
  cases.push_back({"cross_entropy_loss", [](std::uint64_t seed) {
                     Rng rng(seed);
                     const Tensor logits = random_matrix(6, 4, rng, -3.0, 3.0);
                     const std::vector<int> labels = random_ids(6, 4, rng, false);
                     return grad_check([&](Tape& t) { return ad::cross_entropy_loss(t, logits, labels); }, {logits});
                   }});
  cases.push_back({"mse_loss", [](std::uint64_t seed) {
                     Rng rng(seed);
                     const Tensor pred = random_matrix(6, 1, rng);
                     std::vector<double> target(6);
                     for (double& v : target) v = std::uniform_real_distribution<double>(-1, 1)(rng);
                     return grad_check([&](Tape& t) { return ad::mse_loss(t, pred, target); }, {pred});
                   }});
  return cases;
}

namespace {

struct LayerInputs {
  gnn::MessageGraph graph;
  Tensor x;
  Tensor x0;
};

LayerInputs layer_inputs(Rng& rng, std::size_t n, std::size_t h) {
  const LineGraphSample s = random_sample(n, 1, 0.3, rng);
  return {gnn::MessageGraph::from_edges(n, s.edges), random_matrix(n, h, rng), random_matrix(n, h, rng)};
}

}  // namespace

std::vector<GradientCase> layer_gradient_cases() {
  constexpr std::size_t kN = 6;
  constexpr std::size_t kH = 3;
  std::vector<GradientCase> cases;
  cases.push_back({"gcn_layer", [](std::uint64_t seed) {
                     Rng rng(seed);
                     const LayerInputs in = layer_inputs(rng, kN, kH);
                     const gnn::GcnLayer layer = gnn::GcnLayer::create(kH, rng);
                     return grad_check([&](Tape& t) { return weighted_sum(t, layer.forward(t, in.x, in.graph), seed); },
                                       {in.x, layer.weight});
                   }});
  cases.push_back({"gcnii_layer", [](std::uint64_t seed) {
                     Rng rng(seed);
                     const LayerInputs in = layer_inputs(rng, kN, kH);
                     const gnn::GcniiLayer layer = gnn::GcniiLayer::create(kH, 0.2, 1.5, 2, rng);
                     return grad_check(
                         [&](Tape& t) { return weighted_sum(t, layer.forward(t, in.x, in.x0, in.graph), seed); },
                         {in.x, in.x0, layer.weight});
                   }});
  for (bool residual : {false, true}) {
    cases.push_back({residual ? "gatv3_layer" : "gatv2_layer", [residual](std::uint64_t seed) {
                       Rng rng(seed);
                       const LayerInputs in = layer_inputs(rng, kN, kH);
                       const gnn::GatLayer layer = gnn::GatLayer::create(kH, 2, residual ? 0.3 : 0.0, residual, rng);
                       std::vector<Tensor> inputs{in.x};
                       if (residual) inputs.push_back(in.x0);
                       for (const auto& head : layer.heads) {
                         inputs.push_back(head.weight);
                         inputs.push_back(head.att_hidden);
                         inputs.push_back(head.att_out);
                       }
                       return grad_check(
                           [&](Tape& t) { return weighted_sum(t, layer.forward(t, in.x, in.x0, in.graph), seed); },
                           inputs);
                     }});
  }
  return cases;
}

std::vector<GradientCase> model_gradient_cases() {
  std::vector<GradientCase> cases;
  for (gnn::LayerKind kind : {gnn::LayerKind::kGcn, gnn::LayerKind::kGcnii, gnn::LayerKind::kGatv2, gnn::LayerKind::kGatv3}) {
    cases.push_back({"model_" + std::string(gnn::to_string(kind)), [kind](std::uint64_t seed) {
                       Rng rng(seed);
                       const LineGraphSample s = random_sample(5, 9, 0.35, rng);
                       gnn::ModelConfig c;
                       c.kind = kind;
                       c.depth = 2;
                       c.hidden = 4;
                       c.heads = kind == gnn::LayerKind::kGatv3 ? 2 : 1;
                       c.alpha = kind == gnn::LayerKind::kGatv3 ? 0.3 : 0.1;
                       c.num_features = 9;
                       c.num_outputs = 3;
                       c.dropout = 0.25;
                       c.ff_layers = 3;
                       gnn::SurrogateModel model(c, seed);
                       std::vector<int> labels;
                       for (std::size_t i = 0; i < s.num_nodes; ++i) labels.push_back(static_cast<int>(i % 3));
                       // GraphNorm scales start at 1 and shifts at 0; perturb them so
                       // their gradients are exercised away from the initial point.
                       for (Tensor& p : model.parameters()) {
                         for (double& v : p.mutable_values()) v += std::uniform_real_distribution<double>(-0.1, 0.1)(rng);
                       }
                       return grad_check(
                           [&](Tape& t) {
                             std::mt19937_64 drop_rng(seed + 7);
                             return ad::cross_entropy_loss(t, model.forward(t, s, true, drop_rng), labels);
                           },
                           model.parameters());
                     }});
  }
  return cases;
}

}  // namespace flowgnn::testing
