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

#ifndef RFSDRIVE__MODEL__NETWORK_HPP_
#define RFSDRIVE__MODEL__NETWORK_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rfsdrive/autodiff/tensor.hpp"
#include "rfsdrive/data/scenario.hpp"
#include "rfsdrive/geometry.hpp"
#include "rfsdrive/model/config.hpp"
#include "rfsdrive/model/encoder.hpp"

namespace rfsdrive::model
{

/// Trainable tensors by name. Ordered, so iteration (optimizer, checkpoint)
/// is deterministic.
using Parameters = std::map<std::string, ad::Tensor>;

struct ParameterSpec
{
  std::string name;
  ad::Shape shape;
};

/// Every trainable tensor the configuration implies, in name order.
std::vector<ParameterSpec> parameter_specs(const ModelConfig & config);
std::size_t parameter_count(const ModelConfig & config);

/// Seeded initialization: linear weights U(+-1/sqrt(fan_in)), embeddings and
/// learnable queries N(0, 0.1^2), biases 0, layernorm gains 1.
Parameters init_parameters(const ModelConfig & config, std::uint64_t seed);

/// Multi-head attention with projections {prefix}.Wq/bq/Wk/Wv/bv/Wo/bo;
/// queries (n_q x d) attend over keys/values (n_k x d).
ad::Tensor attention(
  const Parameters & params, const std::string & prefix, const ad::Tensor & queries,
  const ad::Tensor & keys_values, std::size_t heads);

/// Projects each view to d_model, adds its camera segment embedding (when
/// enabled), concatenates along tokens and runs one pre-layernorm
/// cross-attention block with the learnable queries. Output (n_queries x d_model).
ad::Tensor adapt(
  const ModelConfig & config, const Parameters & params, std::span<const ad::Tensor> views);

/// One-hot intent times the intent matrix: (1 x d_model).
ad::Tensor embed_intent(const ModelConfig & config, const Parameters & params, data::Intent intent);

/// Two temporal convolutions (relu between) and a max over time: (1 x d_model).
ad::Tensor embed_past(
  const ModelConfig & config, const Parameters & params, std::span<const data::PastState> past);

/// Pre-layernorm self-attention encoder over [E_I; E_c; E_s; Q_wp];
/// returns the output row of the waypoint query (1 x d_model).
ad::Tensor plan(
  const ModelConfig & config, const Parameters & params, const ad::Tensor & fused_image,
  const ad::Tensor & intent, const ad::Tensor & past);

struct Decoded
{
  ad::Tensor waypoints;  // (horizon x 2)
  ad::Tensor deltas;     // (horizon x 2)
};

/// Autoregressive GRU rollout from h_0 = E_wp and w_0 = (0, 0); each step
/// predicts a delta with a linear head and accumulates it.
Decoded decode(const ModelConfig & config, const Parameters & params, const ad::Tensor & context);
ad::Tensor decode_waypoints(
  const ModelConfig & config, const Parameters & params, const ad::Tensor & context);

/// Frozen encoder, trainable parameters and the seed they came from.
class Model
{
public:
  Model(ModelConfig config, FrozenEncoder encoder, Parameters params, std::uint64_t seed);

  /// Stub encoder and fresh parameters, both derived from `seed`.
  static Model create(const ModelConfig & config, std::uint64_t seed);

  const ModelConfig & config() const { return config_; }
  const FrozenEncoder & encoder() const { return encoder_; }
  const Parameters & parameters() const { return params_; }
  Parameters & parameters() { return params_; }
  std::uint64_t seed() const { return seed_; }

  /// Predicted waypoints (horizon x 2), recorded on the active tape.
  ad::Tensor forward(const data::Scenario & scenario) const;
  /// Same computation with recording disabled.
  Trajectory predict(const data::Scenario & scenario) const;

  void save(const std::filesystem::path & path) const;
  static Model load(const std::filesystem::path & path);

private:
  ModelConfig config_;
  FrozenEncoder encoder_;
  Parameters params_;
  std::uint64_t seed_;
};

Trajectory to_trajectory(const ad::Tensor & waypoints, double dt);

}  // namespace rfsdrive::model

#endif  // RFSDRIVE__MODEL__NETWORK_HPP_
