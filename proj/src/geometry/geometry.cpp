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

#include "rfsdrive/geometry.hpp"

#include <cmath>
#include <string>

#include "rfsdrive/errors.hpp"

namespace rfsdrive
{

namespace
{

constexpr double kStationaryThreshold = 1e-6;

void check_index(const Trajectory & traj, std::size_t index, const char * op)
{
  if (index >= traj.horizon()) {
    throw ContractViolation(
      std::string(op) + ": index " + std::to_string(index) + " outside horizon " +
      std::to_string(traj.horizon()));
  }
}

Waypoint2D point_or_origin(const Trajectory & traj, std::ptrdiff_t index)
{
  return index < 0 ? Waypoint2D{} : traj.waypoints[static_cast<std::size_t>(index)];
}

}  // namespace

void validate(const Trajectory & traj)
{
  if (!(traj.dt > 0.0)) {
    throw ContractViolation("trajectory: dt must be positive");
  }
  for (const auto & w : traj.waypoints) {
    if (!std::isfinite(w.x) || !std::isfinite(w.y)) {
      throw ContractViolation("trajectory: non-finite waypoint");
    }
  }
}

Waypoint2D step_displacement(const Trajectory & traj, std::size_t index, int * span_steps)
{
  check_index(traj, index, "step_displacement");
  const auto i = static_cast<std::ptrdiff_t>(index);
  const bool last = index + 1 == traj.horizon();
  const Waypoint2D ahead = last ? traj.waypoints[index] : traj.waypoints[index + 1];
  const Waypoint2D behind = point_or_origin(traj, i - 1);
  if (span_steps != nullptr) {
    *span_steps = last ? 1 : 2;
  }
  return {ahead.x - behind.x, ahead.y - behind.y};
}

double heading_at(const Trajectory & traj, std::size_t index)
{
  check_index(traj, index, "heading_at");
  for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(index); i >= 0; --i) {
    const Waypoint2D d = step_displacement(traj, static_cast<std::size_t>(i), nullptr);
    if (std::hypot(d.x, d.y) >= kStationaryThreshold) {
      return std::atan2(d.y, d.x);
    }
  }
  return 0.0;
}

double speed_at(const Trajectory & traj, std::size_t index)
{
  check_index(traj, index, "speed_at");
  int span = 0;
  const Waypoint2D d = step_displacement(traj, index, &span);
  return std::hypot(d.x, d.y) / (span * traj.dt);
}

FrameError frame_error(const Waypoint2D & pred, const Waypoint2D & ref, double ref_heading)
{
  const double dx = pred.x - ref.x;
  const double dy = pred.y - ref.y;
  const double c = std::cos(ref_heading);
  const double s = std::sin(ref_heading);
  return {std::abs(-s * dx + c * dy), std::abs(c * dx + s * dy)};
}

}  // namespace rfsdrive
