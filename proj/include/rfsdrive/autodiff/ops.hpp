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

#ifndef RFSDRIVE__AUTODIFF__OPS_HPP_
#define RFSDRIVE__AUTODIFF__OPS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "rfsdrive/autodiff/tensor.hpp"

// Differentiable primitives. Every op validates shapes and throws
// ContractViolation naming the op and the offending shapes. Outputs are
// checked for finiteness (NumericError). A tape entry is recorded when any
// input requires a gradient and recording is enabled.
//
// Subgradient conventions: max2 ties go to the first argument, abs'(0) = 0,
// relu'(0) = 0, maxpool ties go to the lowest time index.

namespace rfsdrive::ad
{

inline constexpr double kLayerNormEps = 1e-5;

/// (m x k) * (k x n) -> (m x n).
Tensor matmul(const Tensor & a, const Tensor & b);

/// Same-shape addition, or a rank-2 a (r x c) plus a bias b of c elements
/// (shape (c) or (1 x c)) added to every row.
Tensor add(const Tensor & a, const Tensor & b);
Tensor sub(const Tensor & a, const Tensor & b);
/// Elementwise product, identical shapes only.
Tensor mul(const Tensor & a, const Tensor & b);
Tensor scale(const Tensor & a, double factor);

/// Rank-2 concatenation along axis 0 (rows) or 1 (columns).
Tensor concat(std::span<const Tensor> parts, std::size_t axis);
Tensor concat(std::initializer_list<Tensor> parts, std::size_t axis);
/// Half-open range [begin, end) along an axis of a rank-1 or rank-2 tensor.
Tensor slice(const Tensor & a, std::size_t axis, std::size_t begin, std::size_t end);
Tensor transpose(const Tensor & a);

Tensor softmax_rows(const Tensor & a);
/// Per-row normalization with learned gain and bias of a.cols() elements.
Tensor layernorm(const Tensor & a, const Tensor & gain, const Tensor & bias);

Tensor relu(const Tensor & a);
Tensor tanh(const Tensor & a);
Tensor sigmoid(const Tensor & a);
Tensor abs(const Tensor & a);
/// Elementwise maximum.
Tensor max2(const Tensor & a, const Tensor & b);

/// Scalar (shape (1)) reductions.
Tensor sum(const Tensor & a);
Tensor mean(const Tensor & a);

/// Temporal convolution: x (T x c_in), weight (kernel*c_in x c_out) with row
/// index k*c_in + c, zero same-padding, stride 1. kernel must be odd.
Tensor conv1d(const Tensor & x, const Tensor & weight, std::size_t kernel);
/// Max over the time axis: (T x c) -> (1 x c).
Tensor maxpool_time(const Tensor & x);
/// Row `index` of a (n x c) table as (1 x c).
Tensor embed_lookup(const Tensor & table, std::size_t index);

}  // namespace rfsdrive::ad

#endif  // RFSDRIVE__AUTODIFF__OPS_HPP_
