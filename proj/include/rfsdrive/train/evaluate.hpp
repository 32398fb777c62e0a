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

#ifndef RFSDRIVE__TRAIN__EVALUATE_HPP_
#define RFSDRIVE__TRAIN__EVALUATE_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rfsdrive/data/scenario.hpp"
#include "rfsdrive/geometry.hpp"
#include "rfsdrive/model/network.hpp"
#include "rfsdrive/rfs_metrics.hpp"

namespace rfsdrive::train
{

struct EvalRow
{
  std::string id;
  double rfs = 0.0;
  double ade3 = 0.0;
  double ade5 = 0.0;
};

struct EvalReport
{
  std::vector<EvalRow> rows;  // sorted by id
  double rfs_mean = 0.0;
  double rfs_stderr = 0.0;
  double ade3_mean = 0.0;
  double ade3_stderr = 0.0;
  double ade5_mean = 0.0;
  double ade5_stderr = 0.0;
};

/// Sample standard deviation over sqrt(n); 0 for a single value.
double standard_error(std::span<const double> values);

/// RFS against all raters, ADE@3s and ADE@5s against the top-scored rater.
EvalRow score_prediction(
  const std::string & id, const Trajectory & pred, std::span<const RaterTrajectory> raters,
  const RfsOptions & options = {});

/// Sorts rows by id and aggregates. Empty input is a contract violation,
/// as are duplicate ids.
EvalReport summarize(std::vector<EvalRow> rows);

/// Tape-free forward per scenario, then summarize. Every rater and future
/// horizon must equal the model horizon.
EvalReport evaluate(
  const model::Model & model, std::span<const data::Scenario> scenarios,
  const RfsOptions & options = {});

/// Throws ContractViolation naming both horizons on disagreement.
void check_horizon(const model::ModelConfig & config, const data::Scenario & scenario);

/// Structured report (JSON object, aggregates then rows).
std::string report_json(const EvalReport & report);
/// scenario_id,rfs,ade3,ade5 rows followed by mean and stderr footer rows.
std::string report_csv(const EvalReport & report);

/// Writes <stem>.json and <stem>.csv next to each other.
void write_report(const std::filesystem::path & stem, const EvalReport & report);

}  // namespace rfsdrive::train

#endif  // RFSDRIVE__TRAIN__EVALUATE_HPP_
