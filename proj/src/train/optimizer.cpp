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

#include "rfsdrive/train/optimizer.hpp"

#include <cmath>

#include "rfsdrive/errors.hpp"

namespace rfsdrive::train
{

void AdamOptions::validate() const
{
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ContractViolation("learning rate must be finite and non-negative");
  }
  if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) {
    throw ContractViolation("Adam betas must lie in (0, 1)");
  }
  if (!(eps > 0.0)) {
    throw ContractViolation("Adam eps must be positive");
  }
}

Adam::Adam(const model::Parameters & params, const AdamOptions & options) : options_(options)
{
  options_.validate();
  for (const auto & [name, t] : params) {
    m_.emplace(name, std::vector<double>(t.size(), 0.0));
    v_.emplace(name, std::vector<double>(t.size(), 0.0));
  }
}

void Adam::apply(model::Parameters & params)
{
  if (params.size() != m_.size()) {
    throw ContractViolation("Adam: parameter set changed since construction");
  }
  ++step_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (auto & [name, t] : params) {
    auto mit = m_.find(name);
    if (mit == m_.end() || mit->second.size() != t.size()) {
      throw ContractViolation("Adam: no moment state matching parameter " + name);
    }
    auto & m = mit->second;
    auto & v = v_.at(name);
    const auto g = t.grad();
    auto w = t.mutable_values();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gi = g.empty() ? 0.0 : g[i];
      m[i] = b1 * m[i] + (1.0 - b1) * gi;
      v[i] = b2 * v[i] + (1.0 - b2) * gi * gi;
      const double update = options_.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + options_.eps);
      // A zero update must leave the stored bits alone (including -0.0).
      if (update != 0.0) {
        w[i] -= update;
      }
    }
  }
}

const std::vector<double> & Adam::first_moment(const std::string & name) const { return m_.at(name); }

const std::vector<double> & Adam::second_moment(const std::string & name) const { return v_.at(name); }

double global_grad_norm(const model::Parameters & params)
{
  double sq = 0.0;
  for (const auto & [name, t] : params) {
    for (const double g : t.grad()) {
      sq += g * g;
    }
  }
  return std::sqrt(sq);
}

double clip_grad_norm(model::Parameters & params, double max_norm)
{
  if (!(max_norm > 0.0)) {
    throw ContractViolation("gradient clip norm must be positive");
  }
  const double norm = global_grad_norm(params);
  if (norm > max_norm) {
    const double factor = max_norm / norm;
    for (auto & [name, t] : params) {
      for (auto & g : t.data()->grad) {
        g *= factor;
      }
    }
  }
  return norm;
}

void zero_grad(model::Parameters & params)
{
  for (auto & [name, t] : params) {
    t.clear_grad();
  }
}

}  // namespace rfsdrive::train
