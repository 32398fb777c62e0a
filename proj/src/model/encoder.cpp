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

#include "rfsdrive/model/encoder.hpp"

#include <cmath>

#include "rfsdrive/errors.hpp"
#include "rfsdrive/model/archive.hpp"
#include "rfsdrive/random.hpp"

namespace rfsdrive::model
{

FrozenEncoder::FrozenEncoder(const ModelConfig & config, Mode mode, std::uint64_t seed)
: config_(config), mode_(mode), seed_(seed)
{
}

FrozenEncoder FrozenEncoder::stub(const ModelConfig & config, std::uint64_t seed)
{
  FrozenEncoder enc(config, Mode::kStub, seed);
  const std::size_t width = config.tokens_per_view * config.d_img;
  std::vector<double> a(config.scene_dim * width);
  Rng rng(seed);
  const double sigma = 1.0 / std::sqrt(static_cast<double>(config.scene_dim));
  for (auto & v : a) {
    v = sigma * rng.normal();
  }
  enc.projection_ = ad::Tensor::from({config.scene_dim, width}, std::move(a), false);
  return enc;
}

FrozenEncoder FrozenEncoder::precomputed(const ModelConfig & config)
{
  return FrozenEncoder(config, Mode::kPrecomputed, 0);
}

ad::Tensor FrozenEncoder::encode_scene(const std::vector<double> & scene) const
{
  const std::size_t width = config_.tokens_per_view * config_.d_img;
  std::vector<double> out(width, 0.0);
  const auto a = projection_.values();
  for (std::size_t k = 0; k < scene.size(); ++k) {
    const double s = scene[k];
    const double * row = a.data() + k * width;
    for (std::size_t i = 0; i < width; ++i) {
      out[i] += s * row[i];
    }
  }
  for (auto & v : out) {
    v = std::tanh(v);
  }
  return ad::Tensor::from({config_.tokens_per_view, config_.d_img}, std::move(out), false);
}

ad::Tensor FrozenEncoder::load_embedding(
  const std::filesystem::path & path, const std::string & camera) const
{
  TensorArchive archive;
  try {
    archive = load_archive(path);
  } catch (const IoError & e) {
    throw IngestionError(std::string("embedding file: ") + e.what());
  }
  const auto it = archive.tensors.find(camera);
  if (it == archive.tensors.end()) {
    throw IngestionError("embedding file " + path.string() + ": no tensor for camera " + camera);
  }
  const ad::Shape expected{config_.tokens_per_view, config_.d_img};
  if (it->second.shape() != expected) {
    throw IngestionError(
      "embedding file " + path.string() + ": shape " + ad::shape_str(it->second.shape()) +
      " does not match " + ad::shape_str(expected));
  }
  ad::Tensor t = it->second;
  t.set_requires_grad(false);
  return t;
}

std::vector<ad::Tensor> FrozenEncoder::encode(const data::Scenario & scenario) const
{
  if (scenario.cameras.size() != config_.n_cameras) {
    throw IngestionError(
      "scenario " + scenario.id + ": expected " + std::to_string(config_.n_cameras) +
      " cameras, got " + std::to_string(scenario.cameras.size()));
  }
  std::vector<ad::Tensor> views;
  views.reserve(scenario.cameras.size());
  for (const auto & cam : scenario.cameras) {
    if (cam.has_scene()) {
      if (mode_ != Mode::kStub) {
        throw IngestionError(
          "scenario " + scenario.id + ": camera " + cam.name +
          " has a scene vector but the encoder expects precomputed embeddings");
      }
      if (cam.scene.size() != config_.scene_dim) {
        throw IngestionError(
          "scenario " + scenario.id + ": camera " + cam.name + " scene width " +
          std::to_string(cam.scene.size()) + " != " + std::to_string(config_.scene_dim));
      }
      views.push_back(encode_scene(cam.scene));
    } else {
      std::filesystem::path path(cam.embedding_file);
      if (path.is_relative()) {
        path = scenario.source_dir / path;
      }
      views.push_back(load_embedding(path, cam.name));
    }
  }
  return views;
}

void FrozenEncoder::write_embedding(
  const std::filesystem::path & path, const std::string & camera, const ad::Tensor & features)
{
  TensorArchive archive;
  archive.metadata["kind"] = "embedding";
  archive.tensors.emplace(camera, features.clone());
  save_archive(path, archive);
}

}  // namespace rfsdrive::model
