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

#include "rfsdrive/autodiff/tensor.hpp"

#include <sstream>

#include "rfsdrive/errors.hpp"

namespace rfsdrive::ad
{

std::size_t shape_size(const Shape & shape)
{
  std::size_t n = 1;
  for (const auto d : shape) {
    n *= d;
  }
  return n;
}

std::string shape_str(const Shape & shape)
{
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    os << (i ? "," : "") << shape[i];
  }
  os << ']';
  return os.str();
}

std::vector<double> & TensorData::grad_buffer()
{
  if (grad.empty()) {
    grad.assign(values.size(), 0.0);
  }
  return grad;
}

namespace
{

void validate_shape(const Shape & shape, std::size_t n)
{
  if (shape.empty()) {
    throw ContractViolation("tensor: shape must have at least one extent");
  }
  for (const auto d : shape) {
    if (d == 0) {
      throw ContractViolation("tensor: extents must be positive, got " + shape_str(shape));
    }
  }
  if (shape_size(shape) != n) {
    throw ContractViolation(
      "tensor: shape " + shape_str(shape) + " does not match " + std::to_string(n) + " values");
  }
}

}  // namespace

Tensor make_output(Shape shape, std::vector<double> values, bool requires_grad)
{
  auto data = std::make_shared<TensorData>();
  data->shape = std::move(shape);
  data->values = std::move(values);
  data->requires_grad = requires_grad;
  return Tensor(std::move(data));
}

Tensor Tensor::zeros(Shape shape, bool requires_grad)
{
  const std::size_t n = shape_size(shape);
  validate_shape(shape, n);
  return make_output(std::move(shape), std::vector<double>(n, 0.0), requires_grad);
}

Tensor Tensor::from(Shape shape, std::vector<double> values, bool requires_grad)
{
  validate_shape(shape, values.size());
  return make_output(std::move(shape), std::move(values), requires_grad);
}

Tensor Tensor::scalar(double value)
{
  return make_output({1}, {value}, false);
}

std::size_t Tensor::rows() const
{
  if (rank() != 2) {
    throw ContractViolation("tensor: rows() needs rank 2, got " + shape_str(shape()));
  }
  return shape()[0];
}

std::size_t Tensor::cols() const
{
  if (rank() != 2) {
    throw ContractViolation("tensor: cols() needs rank 2, got " + shape_str(shape()));
  }
  return shape()[1];
}

double Tensor::item() const
{
  if (size() != 1) {
    throw ContractViolation("tensor: item() on non-scalar " + shape_str(shape()));
  }
  return data_->values[0];
}

double Tensor::at(std::size_t r, std::size_t c) const
{
  return data_->values[r * cols() + c];
}

Tensor Tensor::clone() const
{
  return make_output(data_->shape, data_->values, data_->requires_grad);
}

Tape & Tape::active()
{
  thread_local Tape tape;
  return tape;
}

void Tape::record(std::string op, BackwardFn backward)
{
  entries_.push_back(Entry{std::move(op), std::move(backward)});
}

void Tape::replay(const std::function<void(const Entry &)> & visitor)
{
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (visitor) {
      visitor(*it);
    }
    it->backward();
  }
  entries_.clear();
}

void backward(const Tensor & root)
{
  if (!root.defined() || root.size() != 1) {
    throw ContractViolation(
      "backward: root must be a scalar tensor, got " +
      (root.defined() ? shape_str(root.shape()) : std::string("undefined")));
  }
  auto & tape = Tape::active();
  if (root.requires_grad()) {
    root.data()->grad_buffer()[0] += 1.0;
  }
  tape.replay();
}

}  // namespace rfsdrive::ad
