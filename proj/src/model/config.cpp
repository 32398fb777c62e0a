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

#include "rfsdrive/model/config.hpp"

#include <cmath>
#include <string>

#include "rfsdrive/errors.hpp"

namespace rfsdrive::model
{

void ModelConfig::validate() const
{
  const std::size_t extents[] = {
    n_cameras, tokens_per_view, d_img,         d_model,   n_queries,   planner_layers, heads,
    ffn_mult,  horizon,         past_len,      past_features, n_intents, conv_kernel, scene_dim};
  for (const auto e : extents) {
    if (e == 0) {
      throw ContractViolation("model config: every extent must be positive");
    }
  }
  if (d_model % heads != 0) {
    throw ContractViolation(
      "model config: d_model " + std::to_string(d_model) + " not divisible by heads " +
      std::to_string(heads));
  }
  if (conv_kernel % 2 == 0) {
    throw ContractViolation("model config: conv_kernel must be odd");
  }
  if (!(dt > 0.0) || std::abs(static_cast<double>(horizon) * dt - 5.0) > 1e-9) {
    throw ContractViolation("model config: horizon * dt must equal 5 s");
  }
  if (n_queries >= n_cameras * tokens_per_view) {
    throw ContractViolation("model config: n_queries must be below n_cameras * tokens_per_view");
  }
  if (past_features != past_scale.size()) {
    throw ContractViolation("model config: past_features must be 6");
  }
  for (const double s : past_scale) {
    if (!(s > 0.0)) {
      throw ContractViolation("model config: past_scale entries must be positive");
    }
  }
  if (!(waypoint_input_scale > 0.0)) {
    throw ContractViolation("model config: waypoint_input_scale must be positive");
  }
}

void to_json(nlohmann::ordered_json & j, const ModelConfig & c)
{
  j = nlohmann::ordered_json{
    {"n_cameras", c.n_cameras},
    {"tokens_per_view", c.tokens_per_view},
    {"d_img", c.d_img},
    {"d_model", c.d_model},
    {"n_queries", c.n_queries},
    {"planner_layers", c.planner_layers},
    {"heads", c.heads},
    {"ffn_mult", c.ffn_mult},
    {"horizon", c.horizon},
    {"past_len", c.past_len},
    {"past_features", c.past_features},
    {"n_intents", c.n_intents},
    {"conv_kernel", c.conv_kernel},
    {"scene_dim", c.scene_dim},
    {"dt", c.dt},
    {"use_segment_embeddings", c.use_segment_embeddings},
    {"past_scale", c.past_scale},
    {"waypoint_input_scale", c.waypoint_input_scale},
  };
}

void from_json(const nlohmann::ordered_json & j, ModelConfig & c)
{
  j.at("n_cameras").get_to(c.n_cameras);
  j.at("tokens_per_view").get_to(c.tokens_per_view);
  j.at("d_img").get_to(c.d_img);
  j.at("d_model").get_to(c.d_model);
  j.at("n_queries").get_to(c.n_queries);
  j.at("planner_layers").get_to(c.planner_layers);
  j.at("heads").get_to(c.heads);
  j.at("ffn_mult").get_to(c.ffn_mult);
  j.at("horizon").get_to(c.horizon);
  j.at("past_len").get_to(c.past_len);
  j.at("past_features").get_to(c.past_features);
  j.at("n_intents").get_to(c.n_intents);
  j.at("conv_kernel").get_to(c.conv_kernel);
  j.at("scene_dim").get_to(c.scene_dim);
  j.at("dt").get_to(c.dt);
  j.at("use_segment_embeddings").get_to(c.use_segment_embeddings);
  j.at("past_scale").get_to(c.past_scale);
  j.at("waypoint_input_scale").get_to(c.waypoint_input_scale);
}

}  // namespace rfsdrive::model
