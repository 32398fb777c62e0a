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

#include "rfsdrive/train/evaluate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "rfsdrive/errors.hpp"

namespace rfsdrive::train
{

namespace
{

std::string shortest(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double mean_of(std::span<const double> values)
{
  double s = 0.0;
  for (const double v : values) {
    s += v;
  }
  return s / static_cast<double>(values.size());
}

void write_text(const std::filesystem::path & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << text;
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

}  // namespace

double standard_error(std::span<const double> values)
{
  const std::size_t n = values.size();
  if (n < 2) {
    return 0.0;
  }
  const double m = mean_of(values);
  double ss = 0.0;
  for (const double v : values) {
    ss += (v - m) * (v - m);
  }
  return std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

EvalRow score_prediction(
  const std::string & id, const Trajectory & pred, std::span<const RaterTrajectory> raters,
  const RfsOptions & options)
{
  EvalRow row;
  row.id = id;
  row.rfs = rfs(pred, raters, options);
  const auto & ref = raters[top_rater(raters)].traj;
  row.ade3 = ade(pred, ref, 3.0);
  row.ade5 = ade(pred, ref, 5.0);
  return row;
}

EvalReport summarize(std::vector<EvalRow> rows)
{
  if (rows.empty()) {
    throw ContractViolation("cannot summarize an empty evaluation set");
  }
  std::sort(rows.begin(), rows.end(), [](const EvalRow & a, const EvalRow & b) { return a.id < b.id; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].id == rows[i - 1].id) {
      throw ContractViolation("duplicate scenario id " + rows[i].id);
    }
  }
  std::vector<double> r, a3, a5;
  for (const auto & row : rows) {
    r.push_back(row.rfs);
    a3.push_back(row.ade3);
    a5.push_back(row.ade5);
  }
  EvalReport report;
  report.rfs_mean = mean_of(r);
  report.rfs_stderr = standard_error(r);
  report.ade3_mean = mean_of(a3);
  report.ade3_stderr = standard_error(a3);
  report.ade5_mean = mean_of(a5);
  report.ade5_stderr = standard_error(a5);
  report.rows = std::move(rows);
  return report;
}

void check_horizon(const model::ModelConfig & config, const data::Scenario & scenario)
{
  const auto mismatch = [&](const std::string & what, std::size_t h) {
    throw ContractViolation(
      "horizon mismatch: scenario " + scenario.id + " " + what + " has horizon " +
      std::to_string(h) + ", model horizon is " + std::to_string(config.horizon));
  };
  for (const auto & r : scenario.raters) {
    if (r.traj.horizon() != config.horizon) {
      mismatch("rater", r.traj.horizon());
    }
  }
  if (scenario.future && scenario.future->horizon() != config.horizon) {
    mismatch("future", scenario.future->horizon());
  }
}

EvalReport evaluate(
  const model::Model & model, std::span<const data::Scenario> scenarios, const RfsOptions & options)
{
  if (scenarios.empty()) {
    throw ContractViolation("evaluation data is empty");
  }
  std::vector<EvalRow> rows;
  rows.reserve(scenarios.size());
  for (const auto & s : scenarios) {
    check_horizon(model.config(), s);
    rows.push_back(score_prediction(s.id, model.predict(s), s.raters, options));
  }
  return summarize(std::move(rows));
}

std::string report_json(const EvalReport & report)
{
  nlohmann::ordered_json j;
  j["n"] = report.rows.size();
  j["rfs_mean"] = report.rfs_mean;
  j["rfs_stderr"] = report.rfs_stderr;
  j["ade3_mean"] = report.ade3_mean;
  j["ade3_stderr"] = report.ade3_stderr;
  j["ade5_mean"] = report.ade5_mean;
  j["ade5_stderr"] = report.ade5_stderr;
  auto rows = nlohmann::ordered_json::array();
  for (const auto & r : report.rows) {
    nlohmann::ordered_json row;
    row["id"] = r.id;
    row["rfs"] = r.rfs;
    row["ade3"] = r.ade3;
    row["ade5"] = r.ade5;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string report_csv(const EvalReport & report)
{
  std::string out = "scenario_id,rfs,ade3,ade5\n";
  for (const auto & r : report.rows) {
    out += r.id + "," + shortest(r.rfs) + "," + shortest(r.ade3) + "," + shortest(r.ade5) + "\n";
  }
  out += "mean," + shortest(report.rfs_mean) + "," + shortest(report.ade3_mean) + "," +
         shortest(report.ade5_mean) + "\n";
  out += "stderr," + shortest(report.rfs_stderr) + "," + shortest(report.ade3_stderr) + "," +
         shortest(report.ade5_stderr) + "\n";
  return out;
}

void write_report(const std::filesystem::path & stem, const EvalReport & report)
{
  if (stem.has_parent_path()) {
    std::filesystem::create_directories(stem.parent_path());
  }
  auto json_path = stem;
  json_path += ".json";
  auto csv_path = stem;
  csv_path += ".csv";
  write_text(json_path, report_json(report));
  write_text(csv_path, report_csv(report));
}

}  // namespace rfsdrive::train
