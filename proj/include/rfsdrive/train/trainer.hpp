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

#ifndef RFSDRIVE__TRAIN__TRAINER_HPP_
#define RFSDRIVE__TRAIN__TRAINER_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rfsdrive/data/scenario.hpp"
#include "rfsdrive/model/network.hpp"
#include "rfsdrive/rfs_loss.hpp"
#include "rfsdrive/train/optimizer.hpp"

namespace rfsdrive::train
{

struct TrainConfig
{
  std::size_t steps = 2000;
  std::size_t batch_size = 8;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double grad_clip_norm = 1.0;
  std::uint64_t seed = 0;
  std::size_t eval_every = 200;
  /// Metrics log and checkpoints go here; empty disables all file output.
  std::filesystem::path checkpoint_dir;

  AdamOptions adam() const { return {learning_rate, beta1, beta2, adam_eps}; }
  void validate() const;
};

struct MetricsRow
{
  std::size_t step = 0;
  double loss = 0.0;  // mean training batch loss since the previous row
  double rfs_mean = 0.0;
  double ade3 = 0.0;
  double ade5 = 0.0;
};

std::string to_json_line(const MetricsRow & row);

struct TrainResult
{
  std::vector<MetricsRow> metrics;
  double last_batch_loss = 0.0;
};

using ProgressFn = std::function<void(const MetricsRow &)>;

/// Mean trajectory loss over a batch, recorded on the active tape.
ad::Tensor batch_loss(
  const model::Model & model, std::span<const data::Scenario * const> batch, const LossConfig & loss);

/// Seeded mini-batch training. Batches walk through per-epoch permutations
/// drawn from the "data-order" stream of cfg.seed. Every eval_every steps
/// (and after the last step) the validation split is scored and a metrics
/// row is appended to checkpoint_dir/metrics.jsonl together with
/// checkpoint_dir/step_NNNNNN.ckpt; the final model is also written to
/// checkpoint_dir/final.ckpt. Non-finite losses abort with NumericError
/// naming the step and scenario.
TrainResult train_loop(
  model::Model & model, std::span<const data::Scenario> train_set,
  std::span<const data::Scenario> val_set, const TrainConfig & cfg, const LossConfig & loss,
  const ProgressFn & progress = {});

}  // namespace rfsdrive::train

#endif  // RFSDRIVE__TRAIN__TRAINER_HPP_
