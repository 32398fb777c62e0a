// Copyright 2026 The rfsdrive Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RFSDRIVE__AUTODIFF__TENSOR_HPP_
#define RFSDRIVE__AUTODIFF__TENSOR_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace rfsdrive::ad
{

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape & shape);
std::string shape_str(const Shape & shape);

struct TensorData
{
  Shape shape;
  std::vector<double> values;
  std::vector<double> grad;  // empty until a gradient reaches this tensor
  bool requires_grad = false;

  /// Zero-initialized gradient buffer, allocated on first use.
  std::vector<double> & grad_buffer();
};

/// Shared handle to a 64-bit real array. Copies alias the same storage.
///
/// Values produced by an operation are never modified afterwards. Leaf
/// tensors (parameters, inputs of a gradient check) may be updated in place
/// through mutable_values() between tape lifetimes.
class Tensor
{
public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<double> values, bool requires_grad = false);
  static Tensor scalar(double value);

  bool defined() const { return static_cast<bool>(data_); }
  const Shape & shape() const { return data_->shape; }
  std::size_t rank() const { return data_->shape.size(); }
  std::size_t size() const { return data_->values.size(); }
  /// Extent of dimension 0 / 1 of a rank-2 tensor.
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<const double> values() const { return data_->values; }
  std::span<double> mutable_values() { return data_->values; }
  double item() const;
  double at(std::size_t i) const { return data_->values[i]; }
  double at(std::size_t r, std::size_t c) const;

  bool requires_grad() const { return data_->requires_grad; }
  void set_requires_grad(bool flag) { data_->requires_grad = flag; }
  bool has_grad() const { return !data_->grad.empty(); }
  /// Gradient view; empty span when no gradient was ever accumulated.
  std::span<const double> grad() const { return data_->grad; }
  /// Drops the gradient buffer entirely.
  void clear_grad() { data_->grad.clear(); }

  /// Deep copy detached from any tape history.
  Tensor clone() const;

  const std::shared_ptr<TensorData> & data() const { return data_; }

private:
  explicit Tensor(std::shared_ptr<TensorData> data) : data_(std::move(data)) {}

  std::shared_ptr<TensorData> data_;

  friend Tensor make_output(Shape shape, std::vector<double> values, bool requires_grad);
};

/// Internal constructor used by operations.
Tensor make_output(Shape shape, std::vector<double> values, bool requires_grad);

/// Ordered record of executed differentiable operations. One tape per thread.
class Tape
{
public:
  using BackwardFn = std::function<void()>;

  struct Entry
  {
    std::string op;
    BackwardFn backward;
  };

  static Tape & active();

  bool recording() const { return no_grad_depth_ == 0; }
  void record(std::string op, BackwardFn backward);
  std::size_t size() const { return entries_.size(); }
  void clear() { entries_.clear(); }

  /// Replays every entry in strict reverse order, then clears the tape.
  /// The optional visitor observes each entry as it is replayed.
  void replay(const std::function<void(const Entry &)> & visitor = {});

private:
  friend class NoGradGuard;

  std::vector<Entry> entries_;
  int no_grad_depth_ = 0;
};

/// Disables recording on the active tape for its lifetime.
class NoGradGuard
{
public:
  NoGradGuard() { ++Tape::active().no_grad_depth_; }
  ~NoGradGuard() { --Tape::active().no_grad_depth_; }
  NoGradGuard(const NoGradGuard &) = delete;
  NoGradGuard & operator=(const NoGradGuard &) = delete;
};

/// Accumulates d(root)/d(t) into every requires_grad tensor reachable from
/// root and clears the tape. root must hold exactly one element.
void backward(const Tensor & root);

}  // namespace rfsdrive::ad

#endif  // RFSDRIVE__AUTODIFF__TENSOR_HPP_
