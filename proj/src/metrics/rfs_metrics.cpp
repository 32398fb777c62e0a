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

#include "rfsdrive/rfs_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rfsdrive/errors.hpp"

namespace rfsdrive
{

ThresholdAnchors::ThresholdAnchors() : entries_{{3.0, {1.0, 4.0}}, {5.0, {1.8, 7.2}}} {}

ThresholdAnchors::ThresholdAnchors(std::map<double, AnchorThresholds> entries)
: entries_(std::move(entries))
{
  if (entries_.empty()) {
    throw ContractViolation("threshold anchors: at least one anchor required");
  }
  for (const auto & [t, th] : entries_) {
    if (!(t > 0.0) || !(th.lat > 0.0) || !(th.lng > 0.0)) {
      throw ContractViolation("threshold anchors: times and thresholds must be positive");
    }
  }
}

bool ThresholdAnchors::contains(double t) const
{
  return entries_.find(t) != entries_.end();
}

const AnchorThresholds & ThresholdAnchors::at(double t) const
{
  const auto it = entries_.find(t);
  if (it == entries_.end()) {
    throw ContractViolation("trust region: t=" + std::to_string(t) + " is not an anchor time");
  }
  return it->second;
}

double speed_scale(double v)
{
  if (!(v >= 0.0)) {
    throw ContractViolation("speed_scale: speed must be nonnegative");
  }
  if (v < kSlowSpeed) {
    return 0.5;
  }
  if (v < kFastSpeed) {
    return 0.5 + 0.5 * (v - kSlowSpeed) / (kFastSpeed - kSlowSpeed);
  }
  return 1.0;
}

TrustRegion trust_region(const ThresholdAnchors & anchors, double t, double v)
{
  const auto & raw = anchors.at(t);
  const double s = speed_scale(v);
  return {s * raw.lat, s * raw.lng};
}

std::size_t checkpoint_index(const Trajectory & traj, double t)
{
  const double steps = t / traj.dt;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 || rounded < 1.0) {
    throw ContractViolation(
      "checkpoint: t=" + std::to_string(t) + " is not a positive multiple of dt");
  }
  const auto index = static_cast<std::size_t>(rounded) - 1;
  if (index >= traj.horizon()) {
    throw ContractViolation(
      "checkpoint: t=" + std::to_string(t) + " beyond horizon " + std::to_string(traj.horizon()));
  }
  return index;
}

double normalized_error(
  const Waypoint2D & pred, const RaterTrajectory & rater, double t,
  const ThresholdAnchors & anchors)
{
  const std::size_t i = checkpoint_index(rater.traj, t);
  const FrameError e = frame_error(pred, rater.traj.waypoints[i], heading_at(rater.traj, i));
  const TrustRegion tr = trust_region(anchors, t, speed_at(rater.traj, i));
  return std::max(e.delta_lat / tr.tau_lat, e.delta_lng / tr.tau_lng);
}

double waypoint_score(
  const Waypoint2D & pred, const RaterTrajectory & rater, double t,
  const ThresholdAnchors & anchors)
{
  const double delta = normalized_error(pred, rater, t, anchors);
  if (delta <= 1.0) {
    return rater.score;
  }
  return rater.score * std::pow(0.1, delta - 1.0);
}

double rfs(
  const Trajectory & pred, std::span<const RaterTrajectory> raters, const RfsOptions & options)
{
  if (raters.empty()) {
    throw ContractViolation("rfs: rater list is empty");
  }
  if (options.checkpoints.empty()) {
    throw ContractViolation("rfs: no checkpoints");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto & rater : raters) {
    double reduced = options.reduction == CheckpointReduction::kMin
                       ? std::numeric_limits<double>::infinity()
                       : 0.0;
    for (const double t : options.checkpoints) {
      const Waypoint2D & p = pred.waypoints.at(checkpoint_index(pred, t));
      const double s = waypoint_score(p, rater, t, options.anchors);
      if (options.reduction == CheckpointReduction::kMin) {
        reduced = std::min(reduced, s);
      } else {
        reduced += s / static_cast<double>(options.checkpoints.size());
      }
    }
    best = std::max(best, reduced);
  }
  return best;
}

double ade(const Trajectory & pred, const Trajectory & ref, double upto)
{
  const double steps = upto / pred.dt;
  const double rounded = std::round(steps);
  if (!(upto > 0.0) || std::abs(steps - rounded) > 1e-9) {
    throw ContractViolation("ade: horizon must be a positive multiple of dt");
  }
  const auto n = static_cast<std::size_t>(rounded);
  if (pred.horizon() < n || ref.horizon() < n) {
    throw ContractViolation(
      "ade: trajectories shorter than " + std::to_string(n) + " steps (pred " +
      std::to_string(pred.horizon()) + ", ref " + std::to_string(ref.horizon()) + ")");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += std::hypot(
      pred.waypoints[i].x - ref.waypoints[i].x, pred.waypoints[i].y - ref.waypoints[i].y);
  }
  return total / static_cast<double>(n);
}

std::size_t top_rater(std::span<const RaterTrajectory> raters)
{
  if (raters.empty()) {
    throw ContractViolation("top_rater: rater list is empty");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < raters.size(); ++i) {
    if (raters[i].score > raters[best].score) {
      best = i;
    }
  }
  return best;
}

}  // namespace rfsdrive
