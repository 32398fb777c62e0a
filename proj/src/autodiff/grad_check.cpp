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

#include "rfsdrive/autodiff/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rfsdrive/errors.hpp"
#include "rfsdrive/random.hpp"

namespace rfsdrive::ad
{

namespace
{

double evaluate(const ScalarFunction & f, std::span<const Tensor> point)
{
  const Tensor y = f(point);
  if (!y.defined() || y.size() != 1) {
    throw ContractViolation("grad_check: function must return a scalar tensor");
  }
  return y.item();
}

}  // namespace

GradCheckReport grad_check(
  const ScalarFunction & f, std::span<Tensor> point, const GradCheckOptions & options)
{
  if (!(options.eps > 0.0)) {
    throw ContractViolation("grad_check: eps must be positive");
  }
  for (auto & t : point) {
    t.set_requires_grad(true);
    t.clear_grad();
  }
  Tape::active().clear();
  {
    const Tensor y = f(point);
    if (!y.defined() || y.size() != 1) {
      throw ContractViolation("grad_check: function must return a scalar tensor");
    }
    backward(y);
  }
  // Snapshot analytic gradients before numeric evaluation.
  std::vector<std::vector<double>> analytic;
  analytic.reserve(point.size());
  for (const auto & t : point) {
    analytic.emplace_back(
      t.has_grad() ? std::vector<double>(t.grad().begin(), t.grad().end())
                   : std::vector<double>(t.size(), 0.0));
  }

  Rng rng(options.sample_seed);
  GradCheckReport report;
  NoGradGuard no_grad;
  for (std::size_t ti = 0; ti < point.size(); ++ti) {
    Tensor & t = point[ti];
    std::vector<std::size_t> coords;
    if (options.max_coords_per_tensor == 0 || options.max_coords_per_tensor >= t.size()) {
      coords.resize(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) {
        coords[i] = i;
      }
    } else {
      const auto order = rng.permutation(t.size());
      coords.assign(order.begin(), order.begin() + options.max_coords_per_tensor);
      std::sort(coords.begin(), coords.end());
    }
    for (const std::size_t i : coords) {
      auto values = t.mutable_values();
      const double saved = values[i];
      double plus = 0.0;
      double minus = 0.0;
      try {
        values[i] = saved + options.eps;
        plus = evaluate(f, point);
        values[i] = saved - options.eps;
        minus = evaluate(f, point);
      } catch (const std::exception & e) {
        values[i] = saved;
        throw GradCheckError(
          "grad_check: function failed at tensor " + std::to_string(ti) + " element " +
            std::to_string(i) + ": " + e.what(),
          ti, i);
      }
      values[i] = saved;
      const double numeric = (plus - minus) / (2.0 * options.eps);
      const double a = analytic[ti][i];
      const double err = std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
      ++report.coords_checked;
      report.max_abs_error = std::max(report.max_abs_error, std::abs(a - numeric));
      if (err > options.tolerance) {
        ++report.coords_failed;
      }
      if (err > report.max_rel_error || report.coords_checked == 1) {
        report.max_rel_error = err;
        report.worst_tensor = ti;
        report.worst_element = i;
        report.worst_analytic = a;
        report.worst_numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace rfsdrive::ad
