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

#include "rfsdrive/data/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rfsdrive/data/records.hpp"
#include "rfsdrive/errors.hpp"

namespace rfsdrive::data
{

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Intent intent)
{
  switch (intent) {
    case Intent::kLeft:
      return "left";
    case Intent::kStraight:
      return "straight";
    case Intent::kRight:
      return "right";
  }
  return "straight";
}

Intent parse_intent(std::string_view text)
{
  if (text == "left") {
    return Intent::kLeft;
  }
  if (text == "straight") {
    return Intent::kStraight;
  }
  if (text == "right") {
    return Intent::kRight;
  }
  throw IngestionError("intent: unknown label \"" + std::string(text) + "\"");
}

const Trajectory & Scenario::reference() const
{
  if (future) {
    return *future;
  }
  if (raters.empty()) {
    throw ContractViolation("scenario " + id + ": no future and no raters");
  }
  return raters[top_rater(raters)].traj;
}

namespace detail
{

RecordParser::RecordParser(std::size_t line_no) : line_no_(line_no) {}

[[noreturn]] void RecordParser::fail(const std::string & field, const std::string & what) const
{
  throw IngestionError(
    "line " + std::to_string(line_no_) + ": field \"" + field + "\": " + what);
}

const json & RecordParser::member(const json & obj, const std::string & key) const
{
  const auto it = obj.find(key);
  if (it == obj.end()) {
    fail(key, "missing");
  }
  return *it;
}

double RecordParser::number(const json & v, const std::string & field) const
{
  if (!v.is_number()) {
    fail(field, "expected a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    fail(field, "non-finite value");
  }
  return x;
}

std::string RecordParser::string(const json & v, const std::string & field) const
{
  if (!v.is_string()) {
    fail(field, "expected a string");
  }
  return v.get<std::string>();
}

Trajectory RecordParser::waypoints(
  const json & v, const std::string & field, std::optional<std::size_t> horizon) const
{
  if (!v.is_array() || v.empty()) {
    fail(field, "expected a nonempty array of [x, y] pairs");
  }
  if (horizon && v.size() != *horizon) {
    fail(
      field, "horizon: expected " + std::to_string(*horizon) + " waypoints, got " +
               std::to_string(v.size()));
  }
  Trajectory traj;
  traj.dt = kStepSeconds;
  traj.waypoints.reserve(v.size());
  for (const auto & p : v) {
    if (!p.is_array() || p.size() != 2) {
      fail(field, "each waypoint must be [x, y]");
    }
    traj.waypoints.push_back({number(p[0], field), number(p[1], field)});
  }
  return traj;
}

std::vector<RaterTrajectory> RecordParser::raters(
  const json & v, std::optional<std::size_t> horizon) const
{
  if (!v.is_array() || v.empty()) {
    fail("raters", "expected at least one rater trajectory");
  }
  std::vector<RaterTrajectory> out;
  for (const auto & r : v) {
    if (!r.is_object()) {
      fail("raters", "each rater must be an object");
    }
    RaterTrajectory rater;
    rater.score = number(member(r, "score"), "raters.score");
    if (!(rater.score > 0.0) || rater.score > 10.0) {
      fail("raters.score", "score must lie in (0, 10]");
    }
    rater.traj = waypoints(member(r, "waypoints"), "raters.waypoints", horizon);
    if (!out.empty() && rater.traj.horizon() != out.front().traj.horizon()) {
      fail("raters.waypoints", "horizon differs between raters");
    }
    out.push_back(std::move(rater));
  }
  return out;
}

ordered_json waypoints_json(const Trajectory & traj)
{
  ordered_json arr = ordered_json::array();
  for (const auto & w : traj.waypoints) {
    arr.push_back(ordered_json::array({w.x, w.y}));
  }
  return arr;
}

ordered_json raters_json(const std::vector<RaterTrajectory> & raters)
{
  ordered_json arr = ordered_json::array();
  for (const auto & r : raters) {
    ordered_json o;
    o["score"] = r.score;
    o["waypoints"] = waypoints_json(r.traj);
    arr.push_back(std::move(o));
  }
  return arr;
}

json parse_line(std::string_view line, std::size_t line_no)
{
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error & e) {
    throw IngestionError("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
  }
  if (!j.is_object()) {
    throw IngestionError("line " + std::to_string(line_no) + ": record must be a JSON object");
  }
  return j;
}

}  // namespace detail

std::string to_json_line(const Scenario & s)
{
  ordered_json j;
  j["id"] = s.id;
  ordered_json cams = ordered_json::array();
  for (const auto & c : s.cameras) {
    ordered_json cam;
    cam["name"] = c.name;
    if (c.has_scene()) {
      cam["scene"] = c.scene;
    } else {
      cam["embedding_file"] = c.embedding_file;
    }
    cams.push_back(std::move(cam));
  }
  j["cameras"] = std::move(cams);
  ordered_json past = ordered_json::array();
  for (const auto & row : s.past_states) {
    past.push_back(ordered_json(std::vector<double>(row.begin(), row.end())));
  }
  j["past_states"] = std::move(past);
  j["intent"] = std::string(to_string(s.intent));
  j["raters"] = detail::raters_json(s.raters);
  if (s.future) {
    j["future"] = detail::waypoints_json(*s.future);
  }
  return j.dump();
}

Scenario parse_scenario(std::string_view line, std::size_t line_no, const LoadOptions & options)
{
  const json j = detail::parse_line(line, line_no);
  const detail::RecordParser p(line_no);
  Scenario s;
  s.id = p.string(p.member(j, "id"), "id");
  if (s.id.empty()) {
    p.fail("id", "must be nonempty");
  }

  const json & cams = p.member(j, "cameras");
  if (!cams.is_array() || cams.empty()) {
    p.fail("cameras", "expected a nonempty array");
  }
  for (const auto & c : cams) {
    if (!c.is_object()) {
      p.fail("cameras", "each camera must be an object");
    }
    CameraInput cam;
    cam.name = p.string(p.member(c, "name"), "cameras.name");
    const bool has_scene = c.contains("scene");
    const bool has_file = c.contains("embedding_file");
    if (has_scene == has_file) {
      p.fail("cameras", "camera \"" + cam.name + "\" needs exactly one of scene, embedding_file");
    }
    if (has_scene) {
      const json & scene = c["scene"];
      if (!scene.is_array() || scene.empty()) {
        p.fail("cameras.scene", "expected a nonempty array of numbers");
      }
      for (const auto & v : scene) {
        cam.scene.push_back(p.number(v, "cameras.scene"));
      }
    } else {
      cam.embedding_file = p.string(c["embedding_file"], "cameras.embedding_file");
      if (cam.embedding_file.empty()) {
        p.fail("cameras.embedding_file", "must be nonempty");
      }
    }
    s.cameras.push_back(std::move(cam));
  }

  const json & past = p.member(j, "past_states");
  if (!past.is_array() || past.size() != kPastLen) {
    p.fail(
      "past_states", "past_states length: expected " + std::to_string(kPastLen) + " rows, got " +
                       std::to_string(past.is_array() ? past.size() : 0));
  }
  for (const auto & row : past) {
    if (!row.is_array() || row.size() != kPastFeatures) {
      p.fail("past_states", "each row must hold " + std::to_string(kPastFeatures) + " numbers");
    }
    PastState state{};
    for (std::size_t k = 0; k < kPastFeatures; ++k) {
      state[k] = p.number(row[k], "past_states");
    }
    s.past_states.push_back(state);
  }

  try {
    s.intent = parse_intent(p.string(p.member(j, "intent"), "intent"));
  } catch (const IngestionError & e) {
    p.fail("intent", e.what());
  }

  s.raters = p.raters(p.member(j, "raters"), options.horizon);
  if (j.contains("future")) {
    s.future = p.waypoints(j["future"], "future", s.raters.front().traj.horizon());
  }
  return s;
}

std::vector<Scenario> load(const std::filesystem::path & path, LoadOptions options)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open scenario file " + path.string());
  }
  std::vector<Scenario> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    Scenario s = parse_scenario(line, line_no, options);
    s.source_dir = path.parent_path();
    out.push_back(std::move(s));
  }
  return out;
}

void save(const std::filesystem::path & path, const std::vector<Scenario> & scenarios)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write scenario file " + path.string());
  }
  for (const auto & s : scenarios) {
    out << to_json_line(s) << '\n';
  }
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

}  // namespace rfsdrive::data
