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

#ifndef RFSDRIVE__MODEL__CONFIG_HPP_
#define RFSDRIVE__MODEL__CONFIG_HPP_

#include <array>
#include <cstddef>

#include <json.hpp>

namespace rfsdrive::model
{

/// Architectural hyperparameters. Defaults are the desk-scale setup; the
/// 256-token, thousands-wide embeddings of large vision towers are accepted too.
struct ModelConfig
{
  std::size_t n_cameras = 5;
  std::size_t tokens_per_view = 16;  // L_img
  std::size_t d_img = 64;
  std::size_t d_model = 128;
  std::size_t n_queries = 16;  // L_I
  std::size_t planner_layers = 2;
  std::size_t heads = 4;
  std::size_t ffn_mult = 4;
  std::size_t horizon = 20;
  std::size_t past_len = 16;
  std::size_t past_features = 6;
  std::size_t n_intents = 3;
  std::size_t conv_kernel = 3;
  std::size_t scene_dim = 16;  // stub encoder input width
  double dt = 0.25;
  bool use_segment_embeddings = true;

  /// Fixed input normalization: past states are divided feature-wise by
  /// past_scale, decoder inputs w_{t-1} are multiplied by waypoint_input_scale.
  std::array<double, 6> past_scale{20.0, 20.0, 10.0, 10.0, 2.0, 2.0};
  double waypoint_input_scale = 0.05;

  std::size_t gru_hidden() const { return d_model; }
  std::size_t head_dim() const { return d_model / heads; }

  /// d_model divisible by heads, every extent positive, horizon * dt == 5 s,
  /// n_queries < n_cameras * tokens_per_view.
  void validate() const;
};

void to_json(nlohmann::ordered_json & j, const ModelConfig & c);
void from_json(const nlohmann::ordered_json & j, ModelConfig & c);

}  // namespace rfsdrive::model

#endif  // RFSDRIVE__MODEL__CONFIG_HPP_
