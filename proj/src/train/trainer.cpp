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

#include "rfsdrive/train/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "rfsdrive/autodiff/ops.hpp"
#include "rfsdrive/errors.hpp"
#include "rfsdrive/random.hpp"
#include "rfsdrive/train/evaluate.hpp"

namespace rfsdrive::train
{

namespace
{

class BatchSampler
{
public:
  BatchSampler(std::size_t n, std::uint64_t seed) : n_(n), rng_(seed) {}

  std::size_t next()
  {
    if (pos_ == order_.size()) {
      order_ = rng_.permutation(n_);
      pos_ = 0;
    }
    return order_[pos_++];
  }

private:
  std::size_t n_;
  Rng rng_;
  std::vector<std::size_t> order_;
  std::size_t pos_ = 0;
};

std::string step_name(std::size_t step)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "step_%06zu.ckpt", step);
  return buf;
}

}  // namespace

void TrainConfig::validate() const
{
  if (steps == 0 || batch_size == 0 || eval_every == 0) {
    throw ContractViolation("steps, batch_size and eval_every must be positive");
  }
  adam().validate();
  if (!(grad_clip_norm > 0.0) || !std::isfinite(grad_clip_norm)) {
    throw ContractViolation("grad_clip_norm must be positive and finite");
  }
}

std::string to_json_line(const MetricsRow & row)
{
  nlohmann::ordered_json j;
  j["step"] = row.step;
  j["loss"] = row.loss;
  j["rfs_mean"] = row.rfs_mean;
  j["ade3"] = row.ade3;
  j["ade5"] = row.ade5;
  return j.dump();
}

ad::Tensor batch_loss(
  const model::Model & model, std::span<const data::Scenario * const> batch, const LossConfig & loss)
{
  if (batch.empty()) {
    throw ContractViolation("batch_loss: empty batch");
  }
  ad::Tensor total;
  for (const auto * s : batch) {
    ad::Tensor l;
    try {
      l = trajectory_loss(model.forward(*s), s->reference(), loss);
    } catch (const NumericError & e) {
      throw NumericError("scenario " + s->id + ": " + e.what());
    }
    if (!std::isfinite(l.item())) {
      throw NumericError("scenario " + s->id + ": non-finite loss");
    }
    total = total.defined() ? ad::add(total, l) : l;
  }
  return ad::scale(total, 1.0 / static_cast<double>(batch.size()));
}

TrainResult train_loop(
  model::Model & model, std::span<const data::Scenario> train_set,
  std::span<const data::Scenario> val_set, const TrainConfig & cfg, const LossConfig & loss,
  const ProgressFn & progress)
{
  cfg.validate();
  loss.validate();
  if (train_set.empty() || val_set.empty()) {
    throw ContractViolation("training and validation sets must be non-empty");
  }
  for (const auto & s : train_set) {
    check_horizon(model.config(), s);
  }
  for (const auto & s : val_set) {
    check_horizon(model.config(), s);
  }

  std::ofstream metrics_log;
  if (!cfg.checkpoint_dir.empty()) {
    std::filesystem::create_directories(cfg.checkpoint_dir);
    metrics_log.open(cfg.checkpoint_dir / "metrics.jsonl", std::ios::binary | std::ios::trunc);
    if (!metrics_log) {
      throw IoError("cannot write " + (cfg.checkpoint_dir / "metrics.jsonl").string());
    }
  }

  auto & params = model.parameters();
  Adam optimizer(params, cfg.adam());
  BatchSampler sampler(train_set.size(), derive_seed(cfg.seed, "data-order"));
  auto & tape = ad::Tape::active();

  TrainResult result;
  double interval_loss = 0.0;
  std::size_t interval_steps = 0;
  std::vector<const data::Scenario *> batch(cfg.batch_size);
  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    for (auto & slot : batch) {
      slot = &train_set[sampler.next()];
    }
    zero_grad(params);
    tape.clear();
    double value = 0.0;
    try {
      const auto l = batch_loss(model, batch, loss);
      value = l.item();
      ad::backward(l);
    } catch (const NumericError & e) {
      tape.clear();
      throw NumericError("step " + std::to_string(step) + ": " + e.what());
    }
    if (!std::isfinite(global_grad_norm(params))) {
      throw NumericError("step " + std::to_string(step) + ": non-finite gradient");
    }
    clip_grad_norm(params, cfg.grad_clip_norm);
    optimizer.apply(params);
    result.last_batch_loss = value;
    interval_loss += value;
    ++interval_steps;

    if (step % cfg.eval_every == 0 || step == cfg.steps) {
      const auto report = evaluate(model, val_set);
      MetricsRow row{step, interval_loss / static_cast<double>(interval_steps), report.rfs_mean,
        report.ade3_mean, report.ade5_mean};
      interval_loss = 0.0;
      interval_steps = 0;
      result.metrics.push_back(row);
      if (metrics_log.is_open()) {
        metrics_log << to_json_line(row) << "\n";
        metrics_log.flush();
        model.save(cfg.checkpoint_dir / step_name(step));
      }
      if (progress) {
        progress(row);
      }
    }
  }
  zero_grad(params);
  if (!cfg.checkpoint_dir.empty()) {
    model.save(cfg.checkpoint_dir / "final.ckpt");
  }
  return result;
}

}  // namespace rfsdrive::train
