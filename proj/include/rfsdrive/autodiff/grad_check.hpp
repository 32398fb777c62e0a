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

#ifndef RFSDRIVE__AUTODIFF__GRAD_CHECK_HPP_
#define RFSDRIVE__AUTODIFF__GRAD_CHECK_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include "rfsdrive/autodiff/tensor.hpp"

namespace rfsdrive::ad
{

/// Scalar-valued function of the point tensors. It reads the tensors it is
/// given (or tensors aliasing them) and must be deterministic.
using ScalarFunction = std::function<Tensor(std::span<const Tensor>)>;

struct GradCheckOptions
{
  double eps = 1e-6;
  /// 0 checks every element; otherwise at most this many seeded-random
  /// elements per tensor.
  std::size_t max_coords_per_tensor = 0;
  std::uint64_t sample_seed = 0;
  /// Only used to count coords_failed.
  double tolerance = 1e-5;
};

struct GradCheckReport
{
  /// max over checked elements of |a - n| / max(1e-8, |a| + |n|).
  double max_rel_error = 0.0;
  std::size_t worst_tensor = 0;
  std::size_t worst_element = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coords_checked = 0;
  /// Elements whose relative error exceeds the tolerance.
  std::size_t coords_failed = 0;
  /// max over checked elements of |a - n|.
  double max_abs_error = 0.0;
};

/// f threw on a perturbed input.
class GradCheckError : public std::runtime_error
{
public:
  GradCheckError(const std::string & what, std::size_t tensor, std::size_t element)
  : std::runtime_error(what), tensor_index(tensor), element_index(element)
  {
  }
  std::size_t tensor_index;
  std::size_t element_index;
};

/// Compares reverse-mode gradients against central differences
/// (f(x+eps) - f(x-eps)) / (2 eps) element by element. Point tensors are
/// marked requires_grad and their gradients are reset; values are restored
/// exactly after each perturbation.
GradCheckReport grad_check(
  const ScalarFunction & f, std::span<Tensor> point, const GradCheckOptions & options = {});

}  // namespace rfsdrive::ad

#endif  // RFSDRIVE__AUTODIFF__GRAD_CHECK_HPP_
