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


#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rfsdrive/data/generator.hpp"
#include "rfsdrive/data/scenario.hpp"
#include "rfsdrive/errors.hpp"
#include "rfsdrive/random.hpp"

namespace data = rfsdrive::data;
namespace fs = std::filesystem;
using data::ManeuverFamily;
using data::ManeuverSpec;
using rfsdrive::ContractViolation;
using rfsdrive::IngestionError;
using rfsdrive::Rng;

namespace
{

fs::path scratch_dir(const std::string & name)
{
  const fs::path dir = fs::temp_directory_path() / ("rfsdrive_test_data_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string one_record()
{
  Rng rng(5);
  ManeuverSpec spec;
  spec.speed = 8.0;
  return data::to_json_line(data::make_scenario("rec", spec, rng));
}

std::string replace_once(std::string s, const std::string & from, const std::string & to)
{
  const auto at = s.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  if (at != std::string::npos) {
    s.replace(at, from.size(), to);
  }
  return s;
}

std::string parse_error(const std::string & line, std::size_t line_no = 1)
{
  try {
    data::parse_scenario(line, line_no);
  } catch (const IngestionError & e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Kinematics, StraightConstantSpeed)
{
  ManeuverSpec spec;
  spec.speed = 5.0;
  const auto r = data::rollout(spec);
  ASSERT_EQ(r.future.horizon(), 20u);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_NEAR(r.future.waypoints[i].x, 5.0 * 0.25 * (i + 1), 1e-12);
    EXPECT_EQ(r.future.waypoints[i].y, 0.0);
  }
}

TEST(Kinematics, BrakeToStopHoldsPosition)
{
  ManeuverSpec spec;
  spec.family = ManeuverFamily::kBrakeToStop;
  spec.speed = 4.0;
  spec.deceleration = 2.0;
  const auto r = data::rollout(spec);
  // v(t) = 4 - 2t reaches 0 at t = 2 (index 7); x(2) = 4.
  for (std::size_t i = 7; i < 20; ++i) {
    EXPECT_NEAR(r.future.waypoints[i].x, 4.0, 1e-12) << i;
    EXPECT_EQ(r.future.waypoints[i].y, 0.0);
  }
  EXPECT_NEAR(r.future.waypoints[3].x, 4.0 * 1.0 - 1.0, 1e-12);
}

TEST(Kinematics, TurnSignSetsIntent)
{
  ManeuverSpec spec;
  spec.family = ManeuverFamily::kTurn;
  spec.speed = 6.0;
  spec.curvature = 0.04;
  EXPECT_EQ(data::intent_for(spec), data::Intent::kLeft);
  EXPECT_GT(data::rollout(spec).future.waypoints.back().y, 0.0);
  spec.curvature = -0.04;
  EXPECT_EQ(data::intent_for(spec), data::Intent::kRight);
  EXPECT_LT(data::rollout(spec).future.waypoints.back().y, 0.0);
  spec.family = ManeuverFamily::kLaneChange;
  spec.curvature = 0.0;
  spec.lateral_offset = 3.5;
  EXPECT_EQ(data::intent_for(spec), data::Intent::kStraight);
}

TEST(Kinematics, LaneChangeReachesOffset)
{
  ManeuverSpec spec;
  spec.family = ManeuverFamily::kLaneChange;
  spec.speed = 10.0;
  spec.lateral_offset = -2.0;
  const auto r = data::rollout(spec);
  EXPECT_NEAR(r.future.waypoints[15].y, -2.0, 1e-9);  // t = 4 s
  EXPECT_NEAR(r.future.waypoints[19].y, -2.0, 1e-9);
}

TEST(Kinematics, PastAndFutureShareOneState)
{
  Rng rng(41);
  for (int k = 0; k < 500; ++k) {
    const ManeuverSpec spec = data::sample_maneuver(rng);
    const auto r = data::rollout(spec);
    ASSERT_EQ(r.past.size(), data::kPastLen);
    // The last past row is the current state at the origin.
    const auto & now = r.past.back();
    EXPECT_NEAR(now[0], 0.0, 1e-12);
    EXPECT_NEAR(now[1], 0.0, 1e-12);
    for (std::size_t j = 0; j < data::kPastLen; ++j) {
      const auto s = data::state_at(spec, -0.25 * static_cast<double>(data::kPastLen - 1 - j));
      EXPECT_NEAR(r.past[j][0], s.x, 1e-12);
      EXPECT_NEAR(r.past[j][2], s.vx, 1e-12);
    }
    for (std::size_t i = 0; i < 20; ++i) {
      const auto s = data::state_at(spec, 0.25 * static_cast<double>(i + 1));
      EXPECT_NEAR(r.future.waypoints[i].x, s.x, 1e-12);
      EXPECT_NEAR(r.future.waypoints[i].y, s.y, 1e-12);
    }
    // Continuity at the current time.
    const double h = 1e-9;
    const auto before = data::state_at(spec, -h);
    const auto after = data::state_at(spec, h);
    EXPECT_NEAR(before.x, after.x, 1e-7);
    EXPECT_NEAR(before.y, after.y, 1e-7);
    EXPECT_NEAR(before.vx, now[2], 1e-9);
    EXPECT_NEAR(after.vx, now[2], 1e-7);
    EXPECT_NEAR(before.vy, after.vy, 1e-7);
  }
}

TEST(ManeuverSpec, RejectsInsaneRanges)
{
  ManeuverSpec spec;
  spec.speed = 25.0;
  EXPECT_THROW(spec.validate(), ContractViolation);
  spec = {};
  spec.family = ManeuverFamily::kTurn;
  spec.speed = 5.0;
  spec.curvature = 0.2;
  EXPECT_THROW(spec.validate(), ContractViolation);
  spec = {};
  spec.family = ManeuverFamily::kBrakeToStop;
  spec.speed = 5.0;
  spec.deceleration = 5.0;
  EXPECT_THROW(spec.validate(), ContractViolation);
}

TEST(Generator, SceneEncodingIsInjective)
{
  Rng rng(42);
  std::map<std::vector<double>, ManeuverSpec> seen;
  for (int k = 0; k < 5000; ++k) {
    const ManeuverSpec spec = data::sample_maneuver(rng);
    const auto code = data::maneuver_code(spec);
    const std::vector<double> key(code.begin(), code.end());
    const auto [it, fresh] = seen.emplace(key, spec);
    if (!fresh) {
      EXPECT_EQ(it->second, spec);
    }
  }
  EXPECT_EQ(seen.size(), 66u);
}

TEST(Generator, ScenarioLayout)
{
  const auto split = data::generate(40, 3, 0.75);
  ASSERT_EQ(split.train.size(), 30u);
  ASSERT_EQ(split.val.size(), 10u);
  EXPECT_EQ(split.train.front().id, "scn-000000");
  EXPECT_EQ(split.val.front().id, "scn-000030");
  for (const auto & s : split.train) {
    ASSERT_EQ(s.cameras.size(), 5u);
    EXPECT_EQ(s.cameras[0].name, "front");
    EXPECT_EQ(s.cameras[4].name, "side-right");
    for (const auto & cam : s.cameras) {
      ASSERT_EQ(cam.scene.size(), data::kSceneDim);
      for (std::size_t k = 0; k < data::kManeuverCodeDim; ++k) {
        EXPECT_EQ(cam.scene[k], s.cameras[0].scene[k]);
      }
    }
    EXPECT_NE(s.cameras[0].scene.back(), s.cameras[1].scene.back());
    ASSERT_EQ(s.raters.size(), 1u);
    EXPECT_EQ(s.raters[0].score, 10.0);
    ASSERT_TRUE(s.future.has_value());
    EXPECT_EQ(s.raters[0].traj.waypoints, s.future->waypoints);
    EXPECT_EQ(&s.reference(), &*s.future);
  }
}

TEST(Generator, RejectsBadArguments)
{
  EXPECT_THROW(data::generate(0, 1, 0.5), ContractViolation);
  EXPECT_THROW(data::generate(10, 1, 0.0), ContractViolation);
  EXPECT_THROW(data::generate(10, 1, 1.0), ContractViolation);
}

TEST(Generator, DeterministicFiles)
{
  const fs::path a = scratch_dir("det_a");
  const fs::path b = scratch_dir("det_b");
  data::write_split(a, data::generate(64, 9, 0.5));
  data::write_split(b, data::generate(64, 9, 0.5));
  for (const char * f : {"train.jsonl", "val.jsonl"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    EXPECT_FALSE(slurp(a / f).empty());
  }
  data::write_split(b, data::generate(64, 10, 0.5));
  EXPECT_NE(slurp(a / "train.jsonl"), slurp(b / "train.jsonl"));
}

TEST(Generator, NoiseTouchesPastStatesOnly)
{
  data::GeneratorOptions noisy;
  noisy.noise_scale = 0.3;
  const auto clean = data::generate(32, 4, 0.5);
  const auto dirty = data::generate(32, 4, 0.5, noisy);
  for (std::size_t i = 0; i < clean.train.size(); ++i) {
    const auto & c = clean.train[i];
    const auto & d = dirty.train[i];
    EXPECT_EQ(c.future->waypoints, d.future->waypoints);
    EXPECT_EQ(c.intent, d.intent);
    for (std::size_t k = 0; k < c.cameras.size(); ++k) {
      EXPECT_EQ(c.cameras[k].scene, d.cameras[k].scene);
    }
    EXPECT_NE(c.past_states, d.past_states);
  }
}

TEST(Records, RoundTripIsByteIdentical)
{
  const fs::path dir = scratch_dir("roundtrip");
  data::write_split(dir, data::generate(24, 11, 0.5));
  for (const char * f : {"train.jsonl", "val.jsonl"}) {
    const auto loaded = data::load(dir / f);
    ASSERT_EQ(loaded.size(), 12u);
    data::save(dir / (std::string("again_") + f), loaded);
    EXPECT_EQ(slurp(dir / f), slurp(dir / (std::string("again_") + f)));
  }
}

TEST(Records, RejectsShortPastStates)
{
  std::string line = one_record();
  // Drop the first past-state row.
  const auto start = line.find("\"past_states\":[") + std::string("\"past_states\":[").size();
  const auto end = line.find("],", start) + 2;
  line.erase(start, end - start);
  const std::string what = parse_error(line, 7);
  EXPECT_NE(what.find("past_states length"), std::string::npos) << what;
  EXPECT_NE(what.find("line 7"), std::string::npos) << what;
}

TEST(Records, RejectsUnknownIntent)
{
  const std::string line = replace_once(one_record(), "\"intent\":\"straight\"", "\"intent\":\"reverse\"");
  const std::string what = parse_error(line);
  EXPECT_NE(what.find("intent"), std::string::npos) << what;
  EXPECT_THROW(data::parse_intent("reverse"), IngestionError);
  EXPECT_EQ(data::parse_intent("left"), data::Intent::kLeft);
}

TEST(Records, RejectsMalformedInput)
{
  EXPECT_NE(parse_error("{not json", 3).find("line 3"), std::string::npos);
  EXPECT_NE(parse_error("[1, 2]").find("object"), std::string::npos);
  const std::string no_id = replace_once(one_record(), "\"id\":\"rec\",", "");
  EXPECT_NE(parse_error(no_id).find("id"), std::string::npos);
  const std::string bad_score = replace_once(one_record(), "\"score\":10.0", "\"score\":-1.0");
  EXPECT_NE(parse_error(bad_score).find("score"), std::string::npos) << parse_error(bad_score);
}

TEST(Records, RejectsWrongHorizon)
{
  Rng rng(6);
  ManeuverSpec spec;
  spec.speed = 8.0;
  auto s = data::make_scenario("short", spec, rng);
  s.future->waypoints.resize(10);
  s.raters[0].traj.waypoints.resize(10);
  const std::string line = data::to_json_line(s);
  EXPECT_THROW(data::parse_scenario(line, 1), IngestionError);
  data::LoadOptions any;
  any.horizon = std::nullopt;
  EXPECT_EQ(data::parse_scenario(line, 1, any).future->horizon(), 10u);
}

TEST(Records, MissingFileIsIoError)
{
  EXPECT_THROW(data::load("/nonexistent/rfsdrive/val.jsonl"), rfsdrive::IoError);
}
