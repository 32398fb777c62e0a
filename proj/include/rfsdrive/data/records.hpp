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

#ifndef RFSDRIVE__DATA__RECORDS_HPP_
#define RFSDRIVE__DATA__RECORDS_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rfsdrive/data/scenario.hpp"

namespace rfsdrive::data
{

/// {id, waypoints[[x, y] x H]}: an externally produced prediction.
struct PredictionRecord
{
  std::string id;
  Trajectory traj;
};

/// Scoring reference: a full Scenario record or a rater-only record
/// {id, raters[...], future?}.
struct ReferenceRecord
{
  std::string id;
  std::vector<RaterTrajectory> raters;
  std::optional<Trajectory> future;
};

std::string to_json_line(const PredictionRecord & record);
std::vector<PredictionRecord> load_predictions(const std::filesystem::path & path);
std::vector<ReferenceRecord> load_references(const std::filesystem::path & path);
void save_predictions(const std::filesystem::path & path, const std::vector<PredictionRecord> & records);

namespace detail
{

/// Field-level validation helpers shared by the record parsers.
class RecordParser
{
public:
  explicit RecordParser(std::size_t line_no);

  [[noreturn]] void fail(const std::string & field, const std::string & what) const;
  const nlohmann::json & member(const nlohmann::json & obj, const std::string & key) const;
  double number(const nlohmann::json & v, const std::string & field) const;
  std::string string(const nlohmann::json & v, const std::string & field) const;
  Trajectory waypoints(
    const nlohmann::json & v, const std::string & field, std::optional<std::size_t> horizon) const;
  std::vector<RaterTrajectory> raters(
    const nlohmann::json & v, std::optional<std::size_t> horizon) const;

private:
  std::size_t line_no_;
};

nlohmann::ordered_json waypoints_json(const Trajectory & traj);
nlohmann::ordered_json raters_json(const std::vector<RaterTrajectory> & raters);
nlohmann::json parse_line(std::string_view line, std::size_t line_no);

}  // namespace detail

}  // namespace rfsdrive::data

#endif  // RFSDRIVE__DATA__RECORDS_HPP_
