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

#ifndef RFSDRIVE__RFS_LOSS_HPP_
#define RFSDRIVE__RFS_LOSS_HPP_

#include <cstddef>

#include "rfsdrive/autodiff/tensor.hpp"
#include "rfsdrive/geometry.hpp"
#include "rfsdrive/rfs_metrics.hpp"

namespace rfsdrive
{

struct LossConfig
{
  ThresholdAnchors anchors{};
  double lat_floor = 0.1;
  double lng_floor = 0.4;
  bool use_speed_scaling = true;

  /// Floors must be positive and not exceed the smallest anchor thresholds.
  void validate() const;
};

/// Tolerances for any time in (0, last anchor]. Before the first anchor they
/// grow proportionally from zero and are floored; between anchors they are
/// interpolated linearly. Optionally multiplied by speed_scale(v).
TrustRegion loss_thresholds(const LossConfig & cfg, double t, double v);

/// Per-waypoint surrogate max(d_lat / tau_lat, d_lng / tau_lng) for the
/// 0-based waypoint `index` (time (index + 1) * dt). pred_t holds two
/// elements (x, y). Heading, speed and tolerances come from the reference.
ad::Tensor waypoint_loss(
  const ad::Tensor & pred_t, const Trajectory & ref, std::size_t index, const LossConfig & cfg);

/// Mean of the per-waypoint surrogate over the horizon. pred has shape (H x 2).
ad::Tensor trajectory_loss(const ad::Tensor & pred, const Trajectory & ref, const LossConfig & cfg);

}  // namespace rfsdrive

#endif  // RFSDRIVE__RFS_LOSS_HPP_
