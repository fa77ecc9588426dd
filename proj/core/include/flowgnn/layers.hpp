#pragma once

#include <cstddef>
#include <random>
#include <string_view>
#include <vector>

#include "flowgnn/ops.hpp"
#include "flowgnn/tensor.hpp"
#include "flowgnn/transport_graph.hpp"

namespace flowgnn::gnn {

using Rng = std::mt19937_64;
using ad::Tape;
using ad::Tensor;

enum class LayerKind { kGcn, kGcnii, kGatv2, kGatv3 };

std::string_view to_string(LayerKind kind);
LayerKind parse_layer_kind(std::string_view name);

// Message pairs (neighbour -> receiver) for the candidate sets n(i) u {i}.
// n(i) holds every node joined to i by an edge in either direction.
struct MessageGraph {
  std::size_t num_nodes = 0;
  ad::Index src;
  ad::Index dst;
  ad::Index graph_ids;  // all zero: one graph per forward pass
  Tensor inv_count;     // [N x 1], 1 / |n(i) u {i}|

  static MessageGraph from_edges(std::size_t num_nodes, std::span<const GraphEdge> edges);
};

// Unweighted mean over n(i) u {i}.
Tensor mean_aggregate(Tape& tape, const Tensor& x, const MessageGraph& graph);

// Glorot-uniform initialised [rows x cols] parameter.
Tensor glorot(std::size_t rows, std::size_t cols, Rng& rng);

struct Linear {
  Tensor weight;  // [in x out]
  Tensor bias;    // [1 x out]

  static Linear create(std::size_t in, std::size_t out, Rng& rng);
  Tensor forward(Tape& tape, const Tensor& x) const;
};

// relu(mean_{k in n(i) u {i}} x_k  W)
struct GcnLayer {
  Tensor weight;

  static GcnLayer create(std::size_t hidden, Rng& rng);
  Tensor forward(Tape& tape, const Tensor& x, const MessageGraph& graph) const;
};

// Initial residual plus identity mapping:
//   P = (1 - alpha) * mean_agg(x) + alpha * x0
//   out = relu(P ((1 - beta) I + beta W)),  beta = ln(theta / layer_index + 1)
struct GcniiLayer {
  Tensor weight;
  double alpha = 0.1;
  double theta = 1.5;
  std::size_t layer_index = 1;

  static GcniiLayer create(std::size_t hidden, double alpha, double theta, std::size_t layer_index,
                           Rng& rng);
  double beta() const;
  Tensor forward(Tape& tape, const Tensor& x, const Tensor& x0, const MessageGraph& graph) const;
};

// Attention layer. Per head, the score of neighbour k for receiver i is
//   e_ik = a^T leaky_relu([x_k ; x_i] A, 0.2)
// normalised by a softmax over n(i) u {i}. The attended sum is projected by
// W, heads are averaged, and with a residual the layer returns
//   relu((1 - alpha) * mean_h(sum_k att_ik x_k W_h) + alpha * x0_i).
// Without a residual (GATv2) it returns relu(mean_h(...)).
struct GatLayer {
  struct Head {
    Tensor weight;      // W      [H x H]
    Tensor att_hidden;  // A      [2H x H]
    Tensor att_out;     // a      [H x 1]
  };
  std::vector<Head> heads;
  double alpha = 0.0;
  bool residual = false;

  static GatLayer create(std::size_t hidden, std::size_t num_heads, double alpha, bool residual,
                         Rng& rng);

  // `x0` is ignored unless residual. When `attention` is non-null the
  // per-head attention weights ([messages x 1]) are appended to it.
  Tensor forward(Tape& tape, const Tensor& x, const Tensor& x0, const MessageGraph& graph,
                 std::vector<Tensor>* attention = nullptr) const;
};

}  // namespace flowgnn::gnn
