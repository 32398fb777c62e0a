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

#ifndef RFSDRIVE__TRAIN__PIPELINE_CHECK_HPP_
#define RFSDRIVE__TRAIN__PIPELINE_CHECK_HPP_

#include <cstddef>
#include <cstdint>
#include <string>

#include "rfsdrive/autodiff/grad_check.hpp"
#include "rfsdrive/geometry.hpp"
#include "rfsdrive/model/config.hpp"
#include "rfsdrive/rfs_loss.hpp"

namespace rfsdrive::train
{

struct PipelineCheckOptions
{
  std::uint64_t seed = 0;
  double eps = 1e-6;
  /// Sampled elements per parameter tensor; 0 checks all of them.
  std::size_t coords_per_tensor = 8;
  /// Minimum normalized distance of every predicted waypoint from the
  /// loss kinks (|d_lat| = 0, |d_lng| = 0, lateral term == longitudinal term).
  double kink_margin = 1e-3;
  /// Spread added to every row-vector parameter (biases, layernorm gains and
  /// shifts) so the check does not run at the degenerate zero-bias point.
  double bias_spread = 0.1;
  model::ModelConfig model{};
  LossConfig loss{};
};

struct PipelineCheckResult
{
  ad::GradCheckReport report;
  std::string worst_parameter;
  std::string scenario_id;
  double kink_distance = 0.0;
};

/// Smallest normalized distance of pred from the kinks of trajectory_loss.
double loss_kink_distance(const Trajectory & pred, const Trajectory & ref, const LossConfig & cfg);

/// Stub encoder, adapter, planner, GRU decoder and trajectory_loss at a
/// seeded model and a seeded synthetic scenario; gradients with respect to
/// every parameter tensor against central differences. Scenarios are drawn
/// until the initial prediction clears kink_margin.
PipelineCheckResult check_pipeline_gradients(const PipelineCheckOptions & options);

}  // namespace rfsdrive::train

#endif  // RFSDRIVE__TRAIN__PIPELINE_CHECK_HPP_
