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

#ifndef RFSDRIVE__GEOMETRY_HPP_
#define RFSDRIVE__GEOMETRY_HPP_

#include <cstddef>
#include <vector>

namespace rfsdrive
{

inline constexpr double kStepSeconds = 0.25;
inline constexpr std::size_t kHorizon = 20;

/// Position in the ego frame at the current time: x forward, y left (meters).
struct Waypoint2D
{
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Waypoint2D &) const = default;
};

/// Future waypoints at fixed steps. waypoints[i] is the position at time
/// (i + 1) * dt; the current pose is the implicit origin.
struct Trajectory
{
  std::vector<Waypoint2D> waypoints;
  double dt = kStepSeconds;

  std::size_t horizon() const { return waypoints.size(); }
};

/// Absolute prediction error split along / across a reference heading.
struct FrameError
{
  double delta_lat = 0.0;
  double delta_lng = 0.0;
};

/// Throws ContractViolation when dt is not positive or a coordinate is not finite.
void validate(const Trajectory & traj);

/// Displacement used by heading_at / speed_at: central difference
/// w[i+1] - w[i-1] in the interior, one-sided w[i] - w[i-1] at the last index,
/// with the origin standing in for w[-1]. `span_steps` receives 2 or 1.
Waypoint2D step_displacement(const Trajectory & traj, std::size_t index, int * span_steps);

/// Heading (radians) of the trajectory at a 0-based waypoint index. Near-zero
/// displacements (< 1e-6 m) fall back to the nearest earlier valid heading,
/// then to 0.
double heading_at(const Trajectory & traj, std::size_t index);

/// Speed (m/s) of the trajectory at a 0-based waypoint index.
double speed_at(const Trajectory & traj, std::size_t index);

/// Rotates pred - ref by -ref_heading and returns the absolute components.
FrameError frame_error(const Waypoint2D & pred, const Waypoint2D & ref, double ref_heading);

}  // namespace rfsdrive

#endif  // RFSDRIVE__GEOMETRY_HPP_
