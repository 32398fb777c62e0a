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

#include "rfsdrive/data/records.hpp"

#include <fstream>

#include "rfsdrive/errors.hpp"

namespace rfsdrive::data
{

namespace
{

template <typename Parse>
auto read_lines(const std::filesystem::path & path, Parse parse)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::vector<decltype(parse(std::string_view{}, std::size_t{}))> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    out.push_back(parse(line, line_no));
  }
  return out;
}

}  // namespace

std::string to_json_line(const PredictionRecord & record)
{
  nlohmann::ordered_json j;
  j["id"] = record.id;
  j["waypoints"] = detail::waypoints_json(record.traj);
  return j.dump();
}

std::vector<PredictionRecord> load_predictions(const std::filesystem::path & path)
{
  return read_lines(path, [](std::string_view line, std::size_t line_no) {
    const auto j = detail::parse_line(line, line_no);
    const detail::RecordParser p(line_no);
    PredictionRecord r;
    r.id = p.string(p.member(j, "id"), "id");
    r.traj = p.waypoints(p.member(j, "waypoints"), "waypoints", std::nullopt);
    return r;
  });
}

std::vector<ReferenceRecord> load_references(const std::filesystem::path & path)
{
  return read_lines(path, [](std::string_view line, std::size_t line_no) {
    const auto j = detail::parse_line(line, line_no);
    if (j.contains("past_states")) {
      Scenario s = parse_scenario(line, line_no, LoadOptions{std::nullopt});
      return ReferenceRecord{std::move(s.id), std::move(s.raters), std::move(s.future)};
    }
    const detail::RecordParser p(line_no);
    ReferenceRecord r;
    r.id = p.string(p.member(j, "id"), "id");
    r.raters = p.raters(p.member(j, "raters"), std::nullopt);
    if (j.contains("future")) {
      r.future = p.waypoints(j["future"], "future", r.raters.front().traj.horizon());
    }
    return r;
  });
}

void save_predictions(const std::filesystem::path & path, const std::vector<PredictionRecord> & records)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  for (const auto & r : records) {
    out << to_json_line(r) << '\n';
  }
}

}  // namespace rfsdrive::data
