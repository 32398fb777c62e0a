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

#include "rfsdrive/train/pipeline_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rfsdrive/data/generator.hpp"
#include "rfsdrive/errors.hpp"
#include "rfsdrive/model/network.hpp"
#include "rfsdrive/random.hpp"

namespace rfsdrive::train
{

namespace
{

constexpr std::size_t kMaxScenarioDraws = 64;

}  // namespace

double loss_kink_distance(const Trajectory & pred, const Trajectory & ref, const LossConfig & cfg)
{
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ref.horizon(); ++i) {
    const double t = static_cast<double>(i + 1) * ref.dt;
    const auto tau = loss_thresholds(cfg, t, speed_at(ref, i));
    const auto e = frame_error(pred.waypoints[i], ref.waypoints[i], heading_at(ref, i));
    const double lat = e.delta_lat / tau.tau_lat;
    const double lng = e.delta_lng / tau.tau_lng;
    best = std::min({best, lat, lng, std::abs(lat - lng)});
  }
  return best;
}

PipelineCheckResult check_pipeline_gradients(const PipelineCheckOptions & options)
{
  auto m = model::Model::create(options.model, options.seed);
  Rng spread(derive_seed(options.seed, "gradcheck-spread"));
  for (auto & [name, t] : m.parameters()) {
    if (t.rows() == 1) {
      for (auto & v : t.mutable_values()) {
        v += options.bias_spread * spread.uniform(-1.0, 1.0);
      }
    }
  }
  Rng rng(derive_seed(options.seed, "generation"));

  PipelineCheckResult result;
  data::Scenario scenario;
  bool found = false;
  for (std::size_t draw = 0; draw < kMaxScenarioDraws && !found; ++draw) {
    const auto spec = data::sample_maneuver(rng);
    scenario = data::make_scenario("gradcheck-" + std::to_string(draw), spec, rng);
    const double d = loss_kink_distance(m.predict(scenario), scenario.reference(), options.loss);
    if (d >= options.kink_margin) {
      result.kink_distance = d;
      found = true;
    }
  }
  if (!found) {
    throw ContractViolation("no scenario clears the kink margin for this seed");
  }
  result.scenario_id = scenario.id;

  std::vector<std::string> names;
  std::vector<ad::Tensor> point;
  for (const auto & [name, t] : m.parameters()) {
    names.push_back(name);
    point.push_back(t);
  }
  const auto f = [&](std::span<const ad::Tensor>) {
    return trajectory_loss(m.forward(scenario), scenario.reference(), options.loss);
  };
  ad::GradCheckOptions gc;
  gc.eps = options.eps;
  gc.max_coords_per_tensor = options.coords_per_tensor;
  gc.sample_seed = derive_seed(options.seed, "gradcheck");
  result.report = ad::grad_check(f, point, gc);
  result.worst_parameter = names[result.report.worst_tensor];
  return result;
}

}  // namespace rfsdrive::train
