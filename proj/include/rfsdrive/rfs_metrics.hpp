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

#ifndef RFSDRIVE__RFS_METRICS_HPP_
#define RFSDRIVE__RFS_METRICS_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "rfsdrive/geometry.hpp"

namespace rfsdrive
{

struct AnchorThresholds
{
  double lat = 0.0;
  double lng = 0.0;
};

/// Raw lateral/longitudinal tolerances (meters) at checkpoint times (seconds).
class ThresholdAnchors
{
public:
  /// {3 s: (1.0, 4.0), 5 s: (1.8, 7.2)}.
  ThresholdAnchors();
  explicit ThresholdAnchors(std::map<double, AnchorThresholds> entries);

  const std::map<double, AnchorThresholds> & entries() const { return entries_; }
  /// Exact anchor at time t; ContractViolation when t is not an anchor.
  const AnchorThresholds & at(double t) const;
  bool contains(double t) const;

private:
  std::map<double, AnchorThresholds> entries_;
};

struct TrustRegion
{
  double tau_lat = 0.0;
  double tau_lng = 0.0;
};

struct RaterTrajectory
{
  Trajectory traj;
  double score = 10.0;
};

inline constexpr double kSlowSpeed = 1.4;
inline constexpr double kFastSpeed = 11.0;

/// Piecewise-linear threshold scale: 0.5 below 1.4 m/s, 1.0 from 11 m/s up.
double speed_scale(double v);

TrustRegion trust_region(const ThresholdAnchors & anchors, double t, double v);

/// Step index (0-based) whose waypoint sits at time t, i.e. t/dt - 1.
/// ContractViolation when t/dt is not integral or falls outside the horizon.
std::size_t checkpoint_index(const Trajectory & traj, double t);

/// Normalized excess error max(d_lat / tau_lat, d_lng / tau_lng) measured in
/// the rater's frame and scaled by the rater's speed at t.
double normalized_error(
  const Waypoint2D & pred, const RaterTrajectory & rater, double t,
  const ThresholdAnchors & anchors = {});

/// score if the normalized error is <= 1, else score * 0.1^(error - 1).
double waypoint_score(
  const Waypoint2D & pred, const RaterTrajectory & rater, double t,
  const ThresholdAnchors & anchors = {});

enum class CheckpointReduction
{
  kMin,   // default: acceptable at every checkpoint
  kMean,
};

struct RfsOptions
{
  std::vector<double> checkpoints{3.0, 5.0};
  ThresholdAnchors anchors{};
  CheckpointReduction reduction = CheckpointReduction::kMin;
};

/// Per rater, reduce waypoint scores over the checkpoints; then take the best rater.
double rfs(
  const Trajectory & pred, std::span<const RaterTrajectory> raters, const RfsOptions & options = {});

/// Mean Euclidean distance over the first upto/dt waypoints.
double ade(const Trajectory & pred, const Trajectory & ref, double upto);

/// Index of the highest-scored rater (first on ties).
std::size_t top_rater(std::span<const RaterTrajectory> raters);

}  // namespace rfsdrive

#endif  // RFSDRIVE__RFS_METRICS_HPP_
