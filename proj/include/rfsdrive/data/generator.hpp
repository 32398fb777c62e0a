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

#ifndef RFSDRIVE__DATA__GENERATOR_HPP_
#define RFSDRIVE__DATA__GENERATOR_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rfsdrive/data/scenario.hpp"
#include "rfsdrive/random.hpp"

namespace rfsdrive::data
{

enum class ManeuverFamily
{
  kStraight = 0,
  kBrakeToStop = 1,
  kTurn = 2,
  kLaneChange = 3,
};

inline constexpr std::size_t kFamilyCount = 4;
inline constexpr std::size_t kManeuverCodeDim = 8;
inline constexpr std::size_t kDistractorDim = 8;
inline constexpr std::size_t kSceneDim = kManeuverCodeDim + kDistractorDim;
inline constexpr double kLaneChangeSeconds = 4.0;
inline const std::array<const char *, 5> kCameraNames{
  "front", "front-left", "front-right", "side-left", "side-right"};

struct ManeuverSpec
{
  ManeuverFamily family = ManeuverFamily::kStraight;
  double speed = 0.0;           // m/s at the current time
  double curvature = 0.0;       // 1/m, turns only; positive turns left
  double lateral_offset = 0.0;  // m, lane changes only; positive moves left
  double deceleration = 0.0;    // m/s^2 (magnitude), braking only

  /// speed in [0, 20], |curvature| <= 0.1, decel in [0, 4], and the
  /// family-specific parameter present.
  void validate() const;
  bool operator==(const ManeuverSpec &) const = default;
};

struct KinematicState
{
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double ax = 0.0;
  double ay = 0.0;
};

/// Exact ego-frame state at time t (seconds, 0 = now). History (t <= 0)
/// is the steady motion leading into the maneuver.
KinematicState state_at(const ManeuverSpec & spec, double t);

struct Rollout
{
  std::vector<PastState> past;  // times -3.75 s .. 0 s
  Trajectory future;            // times 0.25 s .. 5 s
};

Rollout rollout(const ManeuverSpec & spec);

/// Maneuver part of the scene vector: family one-hot, then speed/20,
/// curvature/0.1, offset/4, decel/4.
std::array<double, kManeuverCodeDim> maneuver_code(const ManeuverSpec & spec);

Intent intent_for(const ManeuverSpec & spec);

/// Draws one maneuver from the sampling grid.
ManeuverSpec sample_maneuver(Rng & rng);

struct GeneratorOptions
{
  /// Standard deviation of noise added to past states only.
  double noise_scale = 0.0;
};

/// Builds one scenario: five camera scene vectors (shared maneuver code plus
/// per-view distractors), past states, intent and the ground truth as both
/// `future` and a single rater with score 10. Past-state noise is drawn from
/// `noise_rng` when given, else from `rng`.
Scenario make_scenario(
  const std::string & id, const ManeuverSpec & spec, Rng & rng, const GeneratorOptions & options = {},
  Rng * noise_rng = nullptr);

struct GeneratedSplit
{
  std::vector<Scenario> train;
  std::vector<Scenario> val;
};

/// Deterministic in (n, seed, split_ratio, options). Noise has its own
/// stream, so the noise scale never changes which maneuvers are drawn. The first
/// round(n * split_ratio) scenarios form the training split.
GeneratedSplit generate(
  std::size_t n, std::uint64_t seed, double split_ratio, const GeneratorOptions & options = {});

/// Writes train.jsonl and val.jsonl into out_dir (created if missing).
void write_split(const std::filesystem::path & out_dir, const GeneratedSplit & split);

}  // namespace rfsdrive::data

#endif  // RFSDRIVE__DATA__GENERATOR_HPP_
