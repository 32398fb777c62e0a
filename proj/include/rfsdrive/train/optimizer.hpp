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

#ifndef RFSDRIVE__TRAIN__OPTIMIZER_HPP_
#define RFSDRIVE__TRAIN__OPTIMIZER_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "rfsdrive/model/network.hpp"

namespace rfsdrive::train
{

struct AdamOptions
{
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const;
};

/// Bias-corrected adaptive-moment update over a fixed parameter set.
class Adam
{
public:
  Adam(const model::Parameters & params, const AdamOptions & options);

  /// One update from the current gradients. Parameters without a gradient
  /// buffer are treated as having a zero gradient.
  void apply(model::Parameters & params);

  std::size_t step() const { return step_; }
  const std::vector<double> & first_moment(const std::string & name) const;
  const std::vector<double> & second_moment(const std::string & name) const;

private:
  AdamOptions options_;
  std::size_t step_ = 0;
  std::map<std::string, std::vector<double>> m_;
  std::map<std::string, std::vector<double>> v_;
};

/// L2 norm over every gradient buffer.
double global_grad_norm(const model::Parameters & params);

/// Rescales all gradients so their global norm is at most max_norm.
/// Returns the norm before clipping.
double clip_grad_norm(model::Parameters & params, double max_norm);

void zero_grad(model::Parameters & params);

}  // namespace rfsdrive::train

#endif  // RFSDRIVE__TRAIN__OPTIMIZER_HPP_
