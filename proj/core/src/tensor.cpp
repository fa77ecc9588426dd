#include "flowgnn/tensor.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "flowgnn/errors.hpp"

namespace flowgnn::ad {

std::size_t shape_numel(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

Tensor make_result(Shape shape, bool requires_grad) {
  auto data = std::make_shared<detail::TensorData>();
  const std::size_t n = shape_numel(shape);
  data->shape = std::move(shape);
  data->value.assign(n, 0.0);
  data->requires_grad = requires_grad;
  if (requires_grad) data->grad.assign(n, 0.0);
  return Tensor(std::move(data));
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  return make_result(std::move(shape), requires_grad);
}

Tensor Tensor::from_values(Shape shape, std::vector<double> values, bool requires_grad) {
  if (shape_numel(shape) != values.size()) {
    throw DimensionError("value count does not match shape");
  }
  Tensor t = make_result(std::move(shape), requires_grad);
  t.data_->value = std::move(values);
  return t;
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                      bool requires_grad) {
  return from_values({rows, cols}, std::move(values), requires_grad);
}

std::size_t Tensor::rows() const {
  const Shape& s = data_->shape;
  if (s.empty()) return 1;
  if (s.size() > 2) throw DimensionError("rows() on a tensor of rank > 2");
  return s[0];
}

std::size_t Tensor::cols() const {
  const Shape& s = data_->shape;
  if (s.size() < 2) return 1;
  if (s.size() > 2) throw DimensionError("cols() on a tensor of rank > 2");
  return s[1];
}

double Tensor::item() const {
  if (numel() != 1) throw DimensionError("item() on a tensor with more than one element");
  return data_->value[0];
}

void Tensor::zero_grad() {
  if (data_->requires_grad) std::fill(data_->grad.begin(), data_->grad.end(), 0.0);
}

Tensor Tensor::clone() const {
  Tensor t = make_result(data_->shape, data_->requires_grad);
  t.data_->value = data_->value;
  return t;
}

void Tape::record(std::function<void()> backward) {
  if (enabled_) records_.push_back(std::move(backward));
}

void Tape::backward(const Tensor& root) {
  if (root.numel() != 1) throw DimensionError("backward root must hold a single value");
  if (!root.requires_grad()) throw DomainError("backward root does not require grad");
  root.impl()->grad[0] += 1.0;
  for (auto it = records_.rbegin(); it != records_.rend(); ++it) (*it)();
  records_.clear();
}

}  // namespace flowgnn::ad
