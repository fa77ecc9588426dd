#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

// Dense float64 tensors and a reverse-mode tape.
namespace flowgnn::ad {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);

namespace detail {

struct TensorData {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // empty unless requires_grad
  bool requires_grad = false;
};

}  // namespace detail

// Shared handle: copies alias the same storage, like a framework tensor.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor from_values(Shape shape, std::vector<double> values, bool requires_grad = false);
  static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                       bool requires_grad = false);

  bool defined() const { return data_ != nullptr; }
  const Shape& shape() const { return data_->shape; }
  std::size_t rank() const { return data_->shape.size(); }
  std::size_t numel() const { return data_->value.size(); }
  // Rank-2 accessors; rank-1 tensors read as a column.
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<const double> values() const { return data_->value; }
  std::span<double> mutable_values() { return data_->value; }
  double at(std::size_t r, std::size_t c) const { return data_->value[r * cols() + c]; }
  double item() const;

  bool requires_grad() const { return data_->requires_grad; }
  std::span<const double> grad() const { return data_->grad; }
  std::span<double> mutable_grad() { return data_->grad; }
  void zero_grad();

  // Fresh storage with the same values and flag; no aliasing.
  Tensor clone() const;

  const std::shared_ptr<detail::TensorData>& impl() const { return data_; }

 private:
  explicit Tensor(std::shared_ptr<detail::TensorData> data) : data_(std::move(data)) {}
  std::shared_ptr<detail::TensorData> data_;

  friend Tensor make_result(Shape shape, bool requires_grad);
};

// Creates an op output; grad storage is allocated when requires_grad.
Tensor make_result(Shape shape, bool requires_grad);

// Ordered record of backward closures. A disabled tape records nothing and
// ops then produce tensors that do not require grad.
class Tape {
 public:
  explicit Tape(bool enabled = true) : enabled_(enabled) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return enabled_; }
  std::size_t size() const { return records_.size(); }

  void record(std::function<void()> backward);

  // Seeds d(root)/d(root) = 1 and replays every record once, newest first.
  // The tape is empty afterwards.
  void backward(const Tensor& root);

 private:
  bool enabled_;
  std::vector<std::function<void()>> records_;
};

}  // namespace flowgnn::ad
