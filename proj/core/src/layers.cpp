#include "flowgnn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flowgnn/errors.hpp"

namespace flowgnn::gnn {

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kGcn:
      return "gcn";
    case LayerKind::kGcnii:
      return "gcnii";
    case LayerKind::kGatv2:
      return "gatv2";
    case LayerKind::kGatv3:
      return "gatv3";
  }
  return "gcn";
}

LayerKind parse_layer_kind(std::string_view name) {
  if (name == "gcn") return LayerKind::kGcn;
  if (name == "gcnii") return LayerKind::kGcnii;
  if (name == "gatv2") return LayerKind::kGatv2;
  if (name == "gatv3") return LayerKind::kGatv3;
  throw DomainError("unknown layer type '" + std::string(name) + "'");
}

MessageGraph MessageGraph::from_edges(std::size_t num_nodes, std::span<const GraphEdge> edges) {
  std::vector<std::vector<int>> nbrs(num_nodes);
  for (std::size_t i = 0; i < num_nodes; ++i) nbrs[i].push_back(static_cast<int>(i));
  for (const GraphEdge& e : edges) {
    if (e.src < 0 || e.dst < 0 || static_cast<std::size_t>(e.src) >= num_nodes ||
        static_cast<std::size_t>(e.dst) >= num_nodes) {
      throw DimensionError("edge endpoint out of range");
    }
    nbrs[e.dst].push_back(e.src);
    nbrs[e.src].push_back(e.dst);
  }
  std::vector<int> src;
  std::vector<int> dst;
  std::vector<double> inv(num_nodes);
  for (std::size_t i = 0; i < num_nodes; ++i) {
    std::sort(nbrs[i].begin(), nbrs[i].end());
    nbrs[i].erase(std::unique(nbrs[i].begin(), nbrs[i].end()), nbrs[i].end());
    for (int k : nbrs[i]) {
      src.push_back(k);
      dst.push_back(static_cast<int>(i));
    }
    inv[i] = 1.0 / static_cast<double>(nbrs[i].size());
  }
  MessageGraph g;
  g.num_nodes = num_nodes;
  g.src = ad::make_index(std::move(src));
  g.dst = ad::make_index(std::move(dst));
  g.graph_ids = ad::make_index(std::vector<int>(num_nodes, 0));
  g.inv_count = Tensor::matrix(num_nodes, 1, std::move(inv));
  return g;
}

Tensor mean_aggregate(Tape& tape, const Tensor& x, const MessageGraph& graph) {
  const Tensor summed =
      ad::segment_sum(tape, ad::gather_rows(tape, x, graph.src), graph.dst, graph.num_nodes);
  return ad::scale_rows(tape, summed, graph.inv_count);
}

Tensor glorot(std::size_t rows, std::size_t cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  std::vector<double> v(rows * cols);
  for (double& x : v) x = dist(rng);
  return Tensor::matrix(rows, cols, std::move(v), true);
}

Linear Linear::create(std::size_t in, std::size_t out, Rng& rng) {
  return {glorot(in, out, rng), Tensor::zeros({1, out}, true)};
}

Tensor Linear::forward(Tape& tape, const Tensor& x) const {
  return ad::add_bias(tape, ad::matmul(tape, x, weight), bias);
}

GcnLayer GcnLayer::create(std::size_t hidden, Rng& rng) { return {glorot(hidden, hidden, rng)}; }

Tensor GcnLayer::forward(Tape& tape, const Tensor& x, const MessageGraph& graph) const {
  return ad::relu(tape, ad::matmul(tape, mean_aggregate(tape, x, graph), weight));
}

GcniiLayer GcniiLayer::create(std::size_t hidden, double alpha, double theta,
                              std::size_t layer_index, Rng& rng) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("GCNII alpha must lie in (0, 1)");
  if (!(theta > 0.0)) throw DomainError("GCNII theta must be positive");
  if (layer_index < 1) throw DomainError("GCNII layer index starts at 1");
  return {glorot(hidden, hidden, rng), alpha, theta, layer_index};
}

double GcniiLayer::beta() const {
  return std::log(theta / static_cast<double>(layer_index) + 1.0);
}

Tensor GcniiLayer::forward(Tape& tape, const Tensor& x, const Tensor& x0,
                           const MessageGraph& graph) const {
  const double b = beta();
  const Tensor p = ad::add(tape, ad::scalar_mul(tape, mean_aggregate(tape, x, graph), 1.0 - alpha),
                           ad::scalar_mul(tape, x0, alpha));
  const Tensor mixed =
      ad::add(tape, ad::scalar_mul(tape, p, 1.0 - b), ad::scalar_mul(tape, ad::matmul(tape, p, weight), b));
  return ad::relu(tape, mixed);
}

GatLayer GatLayer::create(std::size_t hidden, std::size_t num_heads, double alpha, bool residual,
                          Rng& rng) {
  if (num_heads < 1) throw DomainError("attention needs at least one head");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("attention alpha must lie in [0, 1]");
  GatLayer layer;
  layer.alpha = alpha;
  layer.residual = residual;
  for (std::size_t h = 0; h < num_heads; ++h) {
    Head head;
    head.weight = glorot(hidden, hidden, rng);
    head.att_hidden = glorot(2 * hidden, hidden, rng);
    head.att_out = glorot(hidden, 1, rng);
    layer.heads.push_back(std::move(head));
  }
  return layer;
}

Tensor GatLayer::forward(Tape& tape, const Tensor& x, const Tensor& x0, const MessageGraph& graph,
                         std::vector<Tensor>* attention) const {
  const Tensor neighbour = ad::gather_rows(tape, x, graph.src);
  const Tensor receiver = ad::gather_rows(tape, x, graph.dst);
  const Tensor pair = ad::concat_rows(tape, neighbour, receiver);

  Tensor merged;
  for (const Head& head : heads) {
    const Tensor hidden = ad::leaky_relu(tape, ad::matmul(tape, pair, head.att_hidden), 0.2);
    const Tensor score = ad::matmul(tape, hidden, head.att_out);
    const Tensor att = ad::segment_softmax(tape, score, graph.dst, graph.num_nodes);
    if (attention) attention->push_back(att);
    const Tensor attended =
        ad::segment_sum(tape, ad::scale_rows(tape, neighbour, att), graph.dst, graph.num_nodes);
    const Tensor projected = ad::matmul(tape, attended, head.weight);
    merged = merged.defined() ? ad::add(tape, merged, projected) : projected;
  }
  if (heads.size() > 1) merged = ad::scalar_mul(tape, merged, 1.0 / static_cast<double>(heads.size()));

  if (!residual) return ad::relu(tape, merged);
  return ad::relu(tape, ad::add(tape, ad::scalar_mul(tape, merged, 1.0 - alpha),
                                ad::scalar_mul(tape, x0, alpha)));
}

}  // namespace flowgnn::gnn
