#pragma once

#include <cstddef>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "flowgnn/tensor.hpp"

// Differentiable primitives. Every op takes the tape first, checks shapes
// (DimensionError) and registers its backward when any input requires grad.
// All tensors are rank 2 ([rows x cols]); losses return [1 x 1].
namespace flowgnn::ad {

// Shared immutable index vector (segment ids, gather indices).
using Index = std::shared_ptr<const std::vector<int>>;
Index make_index(std::vector<int> ids);

Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b);
Tensor add(Tape& tape, const Tensor& a, const Tensor& b);
Tensor sub(Tape& tape, const Tensor& a, const Tensor& b);
// Hadamard product.
Tensor mul(Tape& tape, const Tensor& a, const Tensor& b);
// [n x m] + [1 x m] broadcast over rows.
Tensor add_bias(Tape& tape, const Tensor& a, const Tensor& bias);
Tensor scalar_mul(Tape& tape, const Tensor& a, double s);
// Row r of the result is a_r times the scalar w_r; w is [n x 1].
Tensor scale_rows(Tape& tape, const Tensor& a, const Tensor& w);
// Row-wise concatenation [a_r ; b_r]: [n x p], [n x q] -> [n x (p+q)].
Tensor concat_rows(Tape& tape, const Tensor& a, const Tensor& b);
Tensor gather_rows(Tape& tape, const Tensor& a, const Index& rows);

Tensor relu(Tape& tape, const Tensor& a);
Tensor leaky_relu(Tape& tape, const Tensor& a, double slope);

Tensor row_softmax(Tape& tape, const Tensor& a);
// Softmax over the rows sharing a segment id, independently per column.
Tensor segment_softmax(Tape& tape, const Tensor& values, const Index& segment_ids,
                       std::size_t num_segments);
Tensor segment_sum(Tape& tape, const Tensor& values, const Index& segment_ids,
                   std::size_t num_segments);
Tensor mean_rows(Tape& tape, const Tensor& a);
Tensor sum(Tape& tape, const Tensor& a);

// Inverted dropout. Identity when !training or p == 0. Throws DomainError
// unless 0 <= p < 1.
Tensor dropout(Tape& tape, const Tensor& a, double p, bool training, std::mt19937_64& rng);

inline constexpr double kGraphNormEps = 1e-5;

// Per graph and channel: gamma * (x - alpha*mean) / sqrt(var + eps) + beta,
// var being the mean of (x - alpha*mean)^2. alpha, gamma, beta are [1 x C].
Tensor graph_norm(Tape& tape, const Tensor& x, const Index& graph_ids, std::size_t num_graphs,
                  const Tensor& alpha, const Tensor& gamma, const Tensor& beta);

// Mean over rows of -log softmax(logits)_label. Throws DomainError on a
// label outside [0, C).
Tensor cross_entropy_loss(Tape& tape, const Tensor& logits, std::span<const int> labels);
// pred is [N x 1]; target has N entries.
Tensor mse_loss(Tape& tape, const Tensor& pred, std::span<const double> target);

}  // namespace flowgnn::ad
