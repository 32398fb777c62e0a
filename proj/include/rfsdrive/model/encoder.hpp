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

#ifndef RFSDRIVE__MODEL__ENCODER_HPP_
#define RFSDRIVE__MODEL__ENCODER_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rfsdrive/autodiff/tensor.hpp"
#include "rfsdrive/data/scenario.hpp"
#include "rfsdrive/model/config.hpp"

namespace rfsdrive::model
{

/// Frozen feature extractor boundary. Emits one (tokens_per_view x d_img)
/// tensor per camera and never takes part in gradient computation.
///
/// Stub mode: features = tanh(scene * A) reshaped, with A a fixed seeded
/// (scene_dim x tokens_per_view*d_img) matrix and no bias.
/// Precomputed mode: features are read from the camera's embedding file, a
/// tensor archive holding one tensor named after the camera.
class FrozenEncoder
{
public:
  enum class Mode
  {
    kStub,
    kPrecomputed,
  };

  static FrozenEncoder stub(const ModelConfig & config, std::uint64_t seed);
  static FrozenEncoder precomputed(const ModelConfig & config);

  Mode mode() const { return mode_; }
  std::uint64_t seed() const { return seed_; }
  /// Stub constants; undefined in precomputed mode.
  const ad::Tensor & projection() const { return projection_; }

  /// IngestionError for missing embedding files, wrong scene widths or
  /// feature shapes that disagree with the configuration.
  std::vector<ad::Tensor> encode(const data::Scenario & scenario) const;

  /// Writes one embedding archive for a camera.
  static void write_embedding(
    const std::filesystem::path & path, const std::string & camera, const ad::Tensor & features);

private:
  FrozenEncoder(const ModelConfig & config, Mode mode, std::uint64_t seed);

  ad::Tensor encode_scene(const std::vector<double> & scene) const;
  ad::Tensor load_embedding(
    const std::filesystem::path & path, const std::string & camera) const;

  ModelConfig config_;
  Mode mode_;
  std::uint64_t seed_;
  ad::Tensor projection_;
};

}  // namespace rfsdrive::model

#endif  // RFSDRIVE__MODEL__ENCODER_HPP_
