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

#include "rfsdrive/data/generator.hpp"

#include <cmath>
#include <cstdio>
#include <system_error>

#include "rfsdrive/errors.hpp"

namespace rfsdrive::data
{

namespace
{

constexpr std::array<double, 6> kSpeedGrid{4.0, 6.0, 8.0, 10.0, 12.0, 14.0};
constexpr std::array<double, 3> kTurnSpeedGrid{4.0, 6.0, 8.0};
constexpr std::array<double, 3> kCurvatureGrid{0.02, 0.04, 0.06};
constexpr std::array<double, 3> kDecelGrid{1.0, 2.0, 3.0};
constexpr std::array<double, 2> kOffsetGrid{2.0, 3.5};

template <std::size_t N>
double pick(Rng & rng, const std::array<double, N> & grid)
{
  return grid[rng.below(N)];
}

double sign(Rng & rng)
{
  return rng.below(2) == 0 ? 1.0 : -1.0;
}

}  // namespace

void ManeuverSpec::validate() const
{
  if (!(speed >= 0.0 && speed <= 20.0)) {
    throw ContractViolation("maneuver: speed must lie in [0, 20] m/s");
  }
  if (!(std::abs(curvature) <= 0.1)) {
    throw ContractViolation("maneuver: |curvature| must not exceed 0.1 1/m");
  }
  if (!(deceleration >= 0.0 && deceleration <= 4.0)) {
    throw ContractViolation("maneuver: deceleration must lie in [0, 4] m/s^2");
  }
  if (family == ManeuverFamily::kTurn && curvature == 0.0) {
    throw ContractViolation("maneuver: a turn needs nonzero curvature");
  }
  if (family == ManeuverFamily::kBrakeToStop && deceleration == 0.0) {
    throw ContractViolation("maneuver: braking needs a positive deceleration");
  }
}

KinematicState state_at(const ManeuverSpec & spec, double t)
{
  const double v = spec.speed;
  switch (spec.family) {
    case ManeuverFamily::kStraight:
      return {v * t, 0.0, v, 0.0, 0.0, 0.0};

    case ManeuverFamily::kBrakeToStop: {
      if (t <= 0.0) {
        return {v * t, 0.0, v, 0.0, 0.0, 0.0};
      }
      const double a = spec.deceleration;
      const double t_stop = v / a;
      if (t < t_stop) {
        return {v * t - 0.5 * a * t * t, 0.0, v - a * t, 0.0, -a, 0.0};
      }
      return {v * v / (2.0 * a), 0.0, 0.0, 0.0, 0.0, 0.0};
    }

    case ManeuverFamily::kTurn: {
      const double k = spec.curvature;
      const double theta = v * k * t;
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      return {s / k, (1.0 - c) / k, v * c, v * s, -v * v * k * s, v * v * k * c};
    }

    case ManeuverFamily::kLaneChange: {
      const double d = spec.lateral_offset;
      if (t <= 0.0) {
        return {v * t, 0.0, v, 0.0, 0.0, 0.0};
      }
      if (t >= kLaneChangeSeconds) {
        return {v * t, d, v, 0.0, 0.0, 0.0};
      }
      // Quintic minimum-jerk profile: zero lateral velocity and acceleration at both ends.
      const double T = kLaneChangeSeconds;
      const double s = t / T;
      const double s2 = s * s;
      const double s3 = s2 * s;
      return {
        v * t,
        d * (10.0 * s3 - 15.0 * s3 * s + 6.0 * s3 * s2),
        v,
        d / T * (30.0 * s2 - 60.0 * s3 + 30.0 * s2 * s2),
        0.0,
        d / (T * T) * (60.0 * s - 180.0 * s2 + 120.0 * s3)};
    }
  }
  throw ContractViolation("maneuver: unknown family");
}

Rollout rollout(const ManeuverSpec & spec)
{
  spec.validate();
  Rollout out;
  out.past.reserve(kPastLen);
  for (std::size_t k = 0; k < kPastLen; ++k) {
    const double t = -static_cast<double>(kPastLen - 1 - k) * kStepSeconds;
    const KinematicState st = state_at(spec, t);
    out.past.push_back({st.x, st.y, st.vx, st.vy, st.ax, st.ay});
  }
  out.future.dt = kStepSeconds;
  out.future.waypoints.reserve(kHorizon);
  for (std::size_t i = 1; i <= kHorizon; ++i) {
    const KinematicState st = state_at(spec, static_cast<double>(i) * kStepSeconds);
    out.future.waypoints.push_back({st.x, st.y});
  }
  return out;
}

std::array<double, kManeuverCodeDim> maneuver_code(const ManeuverSpec & spec)
{
  std::array<double, kManeuverCodeDim> code{};
  code[static_cast<std::size_t>(spec.family)] = 1.0;
  code[4] = spec.speed / 20.0;
  code[5] = spec.curvature / 0.1;
  code[6] = spec.lateral_offset / 4.0;
  code[7] = spec.deceleration / 4.0;
  return code;
}

Intent intent_for(const ManeuverSpec & spec)
{
  if (spec.family == ManeuverFamily::kTurn) {
    return spec.curvature > 0.0 ? Intent::kLeft : Intent::kRight;
  }
  return Intent::kStraight;
}

ManeuverSpec sample_maneuver(Rng & rng)
{
  ManeuverSpec spec;
  spec.family = static_cast<ManeuverFamily>(rng.below(kFamilyCount));
  switch (spec.family) {
    case ManeuverFamily::kStraight:
      spec.speed = pick(rng, kSpeedGrid);
      break;
    case ManeuverFamily::kBrakeToStop:
      spec.speed = pick(rng, kSpeedGrid);
      spec.deceleration = pick(rng, kDecelGrid);
      break;
    case ManeuverFamily::kTurn:
      spec.speed = pick(rng, kTurnSpeedGrid);
      spec.curvature = sign(rng) * pick(rng, kCurvatureGrid);
      break;
    case ManeuverFamily::kLaneChange:
      spec.speed = pick(rng, kSpeedGrid);
      spec.lateral_offset = sign(rng) * pick(rng, kOffsetGrid);
      break;
  }
  return spec;
}

Scenario make_scenario(
  const std::string & id, const ManeuverSpec & spec, Rng & rng, const GeneratorOptions & options,
  Rng * noise_rng)
{
  const Rollout r = rollout(spec);
  const auto code = maneuver_code(spec);
  Scenario s;
  s.id = id;
  for (const char * name : kCameraNames) {
    CameraInput cam;
    cam.name = name;
    cam.scene.assign(code.begin(), code.end());
    for (std::size_t k = 0; k < kDistractorDim; ++k) {
      cam.scene.push_back(rng.uniform(-1.0, 1.0));
    }
    s.cameras.push_back(std::move(cam));
  }
  s.past_states = r.past;
  if (options.noise_scale > 0.0) {
    Rng & noise = noise_rng != nullptr ? *noise_rng : rng;
    for (auto & row : s.past_states) {
      for (auto & v : row) {
        v += options.noise_scale * noise.normal();
      }
    }
  }
  s.intent = intent_for(spec);
  s.raters.push_back(RaterTrajectory{r.future, 10.0});
  s.future = r.future;
  return s;
}

GeneratedSplit generate(
  std::size_t n, std::uint64_t seed, double split_ratio, const GeneratorOptions & options)
{
  if (n == 0) {
    throw ContractViolation("generate: n must be positive");
  }
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    throw ContractViolation("generate: split ratio must lie in (0, 1)");
  }
  const auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * split_ratio));
  Rng rng(derive_seed(seed, "generation"));
  Rng noise(derive_seed(seed, "observation-noise"));
  GeneratedSplit out;
  for (std::size_t i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "scn-%06zu", i);
    const ManeuverSpec spec = sample_maneuver(rng);
    Scenario s = make_scenario(id, spec, rng, options, &noise);
    (i < n_train ? out.train : out.val).push_back(std::move(s));
  }
  return out;
}

void write_split(const std::filesystem::path & out_dir, const GeneratedSplit & split)
{
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  }
  save(out_dir / "train.jsonl", split.train);
  save(out_dir / "val.jsonl", split.val);
}

}  // namespace rfsdrive::data
