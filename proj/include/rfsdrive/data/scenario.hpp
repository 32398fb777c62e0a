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

#ifndef RFSDRIVE__DATA__SCENARIO_HPP_
#define RFSDRIVE__DATA__SCENARIO_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rfsdrive/geometry.hpp"
#include "rfsdrive/rfs_metrics.hpp"

namespace rfsdrive::data
{

inline constexpr std::size_t kPastLen = 16;
inline constexpr std::size_t kPastFeatures = 6;

/// (x m, y m, vx m/s, vy m/s, ax m/s^2, ay m/s^2) in the ego frame.
using PastState = std::array<double, kPastFeatures>;

enum class Intent
{
  kLeft = 0,
  kStraight = 1,
  kRight = 2,
};

std::string_view to_string(Intent intent);
/// IngestionError on anything other than "left", "straight", "right".
Intent parse_intent(std::string_view text);

/// One camera view: either a scene-parameter vector for the stub encoder or
/// a path to a precomputed embedding file (relative to the scenario file).
struct CameraInput
{
  std::string name;
  std::vector<double> scene;
  std::string embedding_file;

  bool has_scene() const { return embedding_file.empty(); }
};

struct Scenario
{
  std::string id;
  std::vector<CameraInput> cameras;
  std::vector<PastState> past_states;
  Intent intent = Intent::kStraight;
  std::vector<RaterTrajectory> raters;
  std::optional<Trajectory> future;
  /// Directory of the file this record was loaded from; relative
  /// embedding_file paths resolve against it. Not serialized.
  std::filesystem::path source_dir;

  /// Training and validation reference: the ground-truth future when
  /// present, otherwise the highest-scored rater trajectory.
  const Trajectory & reference() const;
};

struct LoadOptions
{
  /// Required rater/future horizon; nullopt accepts any positive horizon
  /// that is consistent within each record.
  std::optional<std::size_t> horizon = kHorizon;
};

/// Canonical single-line JSON encoding (field order id, cameras,
/// past_states, intent, raters, future).
std::string to_json_line(const Scenario & scenario);

/// Parses and validates one record. Errors name the line and the field.
Scenario parse_scenario(std::string_view line, std::size_t line_no, const LoadOptions & options = {});

/// Line-delimited records; blank lines are rejected.
std::vector<Scenario> load(const std::filesystem::path & path, LoadOptions options = {});
void save(const std::filesystem::path & path, const std::vector<Scenario> & scenarios);

}  // namespace rfsdrive::data

#endif  // RFSDRIVE__DATA__SCENARIO_HPP_
