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

#include "rfsdrive/model/network.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>
#include <utility>

#include "rfsdrive/autodiff/ops.hpp"
#include "rfsdrive/errors.hpp"
#include "rfsdrive/model/archive.hpp"
#include "rfsdrive/random.hpp"

namespace rfsdrive::model
{

namespace
{

enum class Init
{
  kLinear,  // U(+-1/sqrt(fan_in)), fan_in = rows (or the given value)
  kZero,
  kOne,
  kEmbed,
};

struct Entry
{
  ParameterSpec spec;
  Init init;
  std::size_t fan_in;
};

class SpecBuilder
{
public:
  void linear(const std::string & name, std::size_t in, std::size_t out)
  {
    add(name + ".W", {in, out}, Init::kLinear, in);
    add(name + ".b", {1, out}, Init::kZero, 0);
  }
  void norm(const std::string & name, std::size_t d)
  {
    add(name + ".gain", {1, d}, Init::kOne, 0);
    add(name + ".bias", {1, d}, Init::kZero, 0);
  }
  void add(const std::string & name, ad::Shape shape, Init init, std::size_t fan_in)
  {
    entries.push_back({{name, std::move(shape)}, init, fan_in});
  }
  void attention(const std::string & name, std::size_t d)
  {
    // No key bias: it shifts every score of a query row equally and the
    // softmax cancels it, so it would never receive a gradient.
    for (const char * p : {"q", "k", "v", "o"}) {
      add(name + ".W" + p, {d, d}, Init::kLinear, d);
      if (std::string_view(p) != "k") {
        add(name + ".b" + p, {1, d}, Init::kZero, 0);
      }
    }
  }
  void ffn(const std::string & name, std::size_t d, std::size_t hidden)
  {
    add(name + ".W1", {d, hidden}, Init::kLinear, d);
    add(name + ".b1", {1, hidden}, Init::kZero, 0);
    add(name + ".W2", {hidden, d}, Init::kLinear, hidden);
    add(name + ".b2", {1, d}, Init::kZero, 0);
  }

  std::vector<Entry> entries;
};

std::vector<Entry> build_entries(const ModelConfig & c)
{
  c.validate();
  const std::size_t d = c.d_model;
  const std::size_t hidden = c.ffn_mult * d;
  const std::size_t g = c.gru_hidden();
  SpecBuilder b;
  b.linear("proj", c.d_img, d);
  if (c.use_segment_embeddings) {
    b.add("segment", {c.n_cameras, d}, Init::kEmbed, 0);
  }

  b.add("adapter.queries", {c.n_queries, d}, Init::kEmbed, 0);
  b.norm("adapter.ln_q", d);
  b.norm("adapter.ln_kv", d);
  b.attention("adapter.attn", d);
  b.norm("adapter.ln_ffn", d);
  b.ffn("adapter.ffn", d, hidden);

  b.add("intent.table", {c.n_intents, d}, Init::kEmbed, 0);

  b.add("past.conv1.W", {c.conv_kernel * c.past_features, d}, Init::kLinear,
    c.conv_kernel * c.past_features);
  b.add("past.conv1.b", {1, d}, Init::kZero, 0);
  b.add("past.conv2.W", {c.conv_kernel * d, d}, Init::kLinear, c.conv_kernel * d);
  b.add("past.conv2.b", {1, d}, Init::kZero, 0);

  for (std::size_t l = 0; l < c.planner_layers; ++l) {
    const std::string p = "planner." + std::to_string(l);
    b.norm(p + ".ln1", d);
    b.attention(p + ".attn", d);
    b.norm(p + ".ln2", d);
    b.ffn(p + ".ffn", d, hidden);
  }
  b.add("planner.query", {1, d}, Init::kEmbed, 0);

  b.linear("gru.in", 2, d);
  for (const char * gate : {"z", "r", "h"}) {
    b.add(std::string("gru.W_") + gate, {d, g}, Init::kLinear, g);
    b.add(std::string("gru.U_") + gate, {g, g}, Init::kLinear, g);
    b.add(std::string("gru.b_") + gate, {1, g}, Init::kZero, 0);
  }
  b.linear("head", g, 2);
  return std::move(b.entries);
}

const ad::Tensor & param(const Parameters & params, const std::string & name)
{
  const auto it = params.find(name);
  if (it == params.end()) {
    throw ContractViolation("missing parameter " + name);
  }
  return it->second;
}

ad::Tensor linear(const Parameters & p, const std::string & name, const ad::Tensor & x)
{
  return ad::add(ad::matmul(x, param(p, name + ".W")), param(p, name + ".b"));
}

ad::Tensor norm(const Parameters & p, const std::string & name, const ad::Tensor & x)
{
  return ad::layernorm(x, param(p, name + ".gain"), param(p, name + ".bias"));
}

ad::Tensor ffn(const Parameters & p, const std::string & name, const ad::Tensor & x)
{
  const auto h = ad::relu(ad::add(ad::matmul(x, param(p, name + ".W1")), param(p, name + ".b1")));
  return ad::add(ad::matmul(h, param(p, name + ".W2")), param(p, name + ".b2"));
}

void check_matches(const ModelConfig & config, const Parameters & params)
{
  for (const auto & e : build_entries(config)) {
    const auto it = params.find(e.spec.name);
    if (it == params.end()) {
      throw ContractViolation("missing parameter " + e.spec.name);
    }
    if (it->second.shape() != e.spec.shape) {
      throw ContractViolation(
        "parameter " + e.spec.name + " has shape " + ad::shape_str(it->second.shape()) +
        ", configuration implies " + ad::shape_str(e.spec.shape));
    }
  }
  if (params.size() != build_entries(config).size()) {
    throw ContractViolation("parameter set contains tensors the configuration does not use");
  }
}

}  // namespace

std::vector<ParameterSpec> parameter_specs(const ModelConfig & config)
{
  std::vector<ParameterSpec> out;
  for (auto & e : build_entries(config)) {
    out.push_back(std::move(e.spec));
  }
  std::sort(out.begin(), out.end(), [](const auto & a, const auto & b) { return a.name < b.name; });
  return out;
}

std::size_t parameter_count(const ModelConfig & config)
{
  std::size_t n = 0;
  for (const auto & s : parameter_specs(config)) {
    n += ad::shape_size(s.shape);
  }
  return n;
}

Parameters init_parameters(const ModelConfig & config, std::uint64_t seed)
{
  // Entries are drawn in construction order, which follows the forward pass.
  Rng rng(seed);
  Parameters params;
  for (const auto & e : build_entries(config)) {
    std::vector<double> values(ad::shape_size(e.spec.shape));
    switch (e.init) {
      case Init::kLinear: {
        const double bound = 1.0 / std::sqrt(static_cast<double>(e.fan_in));
        for (auto & v : values) {
          v = rng.uniform(-bound, bound);
        }
        break;
      }
      case Init::kEmbed:
        for (auto & v : values) {
          v = 0.1 * rng.normal();
        }
        break;
      case Init::kOne:
        std::fill(values.begin(), values.end(), 1.0);
        break;
      case Init::kZero:
        break;
    }
    params.emplace(e.spec.name, ad::Tensor::from(e.spec.shape, std::move(values), true));
  }
  return params;
}

ad::Tensor attention(
  const Parameters & params, const std::string & prefix, const ad::Tensor & queries,
  const ad::Tensor & keys_values, std::size_t heads)
{
  const auto qp = ad::add(ad::matmul(queries, param(params, prefix + ".Wq")), param(params, prefix + ".bq"));
  const auto kp = ad::matmul(keys_values, param(params, prefix + ".Wk"));
  const auto vp = ad::add(ad::matmul(keys_values, param(params, prefix + ".Wv")), param(params, prefix + ".bv"));
  const std::size_t d = qp.cols();
  if (heads == 0 || d % heads != 0) {
    throw ContractViolation("attention: width " + std::to_string(d) + " not divisible by heads");
  }
  const std::size_t hd = d / heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(hd));
  std::vector<ad::Tensor> outs;
  outs.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    const auto qh = ad::slice(qp, 1, h * hd, (h + 1) * hd);
    const auto kh = ad::slice(kp, 1, h * hd, (h + 1) * hd);
    const auto vh = ad::slice(vp, 1, h * hd, (h + 1) * hd);
    const auto weights = ad::softmax_rows(ad::scale(ad::matmul(qh, ad::transpose(kh)), inv_sqrt));
    outs.push_back(ad::matmul(weights, vh));
  }
  const auto merged = ad::concat(outs, 1);
  return ad::add(ad::matmul(merged, param(params, prefix + ".Wo")), param(params, prefix + ".bo"));
}

ad::Tensor adapt(
  const ModelConfig & config, const Parameters & params, std::span<const ad::Tensor> views)
{
  if (views.size() != config.n_cameras) {
    throw ContractViolation(
      "adapt: expected " + std::to_string(config.n_cameras) + " views, got " +
      std::to_string(views.size()));
  }
  std::vector<ad::Tensor> tokens;
  tokens.reserve(views.size());
  for (std::size_t j = 0; j < views.size(); ++j) {
    const ad::Shape expected{config.tokens_per_view, config.d_img};
    if (views[j].shape() != expected) {
      throw ContractViolation(
        "adapt: view " + std::to_string(j) + " has shape " + ad::shape_str(views[j].shape()) +
        ", expected " + ad::shape_str(expected));
    }
    auto projected = linear(params, "proj", views[j]);
    if (config.use_segment_embeddings) {
      projected = ad::add(projected, ad::embed_lookup(param(params, "segment"), j));
    }
    tokens.push_back(std::move(projected));
  }
  const auto all_tokens = ad::concat(tokens, 0);
  const auto & queries = param(params, "adapter.queries");
  auto x = ad::add(
    queries, attention(
               params, "adapter.attn", norm(params, "adapter.ln_q", queries),
               norm(params, "adapter.ln_kv", all_tokens), config.heads));
  return ad::add(x, ffn(params, "adapter.ffn", norm(params, "adapter.ln_ffn", x)));
}

ad::Tensor embed_intent(const ModelConfig & config, const Parameters & params, data::Intent intent)
{
  const auto index = static_cast<std::size_t>(intent);
  if (index >= config.n_intents) {
    throw ContractViolation("embed_intent: intent index out of range");
  }
  return ad::embed_lookup(param(params, "intent.table"), index);
}

ad::Tensor embed_past(
  const ModelConfig & config, const Parameters & params, std::span<const data::PastState> past)
{
  if (past.size() != config.past_len) {
    throw ContractViolation(
      "embed_past: expected " + std::to_string(config.past_len) + " states, got " +
      std::to_string(past.size()));
  }
  std::vector<double> values;
  values.reserve(past.size() * config.past_features);
  for (const auto & s : past) {
    for (std::size_t f = 0; f < config.past_features; ++f) {
      values.push_back(s[f] / config.past_scale[f]);
    }
  }
  const auto x = ad::Tensor::from({config.past_len, config.past_features}, std::move(values));
  const auto h = ad::relu(ad::add(
    ad::conv1d(x, param(params, "past.conv1.W"), config.conv_kernel),
    param(params, "past.conv1.b")));
  const auto h2 = ad::add(
    ad::conv1d(h, param(params, "past.conv2.W"), config.conv_kernel),
    param(params, "past.conv2.b"));
  return ad::maxpool_time(h2);
}

ad::Tensor plan(
  const ModelConfig & config, const Parameters & params, const ad::Tensor & fused_image,
  const ad::Tensor & intent, const ad::Tensor & past)
{
  auto x = ad::concat({fused_image, intent, past, param(params, "planner.query")}, 0);
  for (std::size_t l = 0; l < config.planner_layers; ++l) {
    const std::string p = "planner." + std::to_string(l);
    const auto n1 = norm(params, p + ".ln1", x);
    x = ad::add(x, attention(params, p + ".attn", n1, n1, config.heads));
    x = ad::add(x, ffn(params, p + ".ffn", norm(params, p + ".ln2", x)));
  }
  const std::size_t last = x.rows() - 1;
  return ad::slice(x, 0, last, last + 1);
}

Decoded decode(const ModelConfig & config, const Parameters & params, const ad::Tensor & context)
{
  if (context.shape() != ad::Shape{1, config.gru_hidden()}) {
    throw ContractViolation("decode: context has shape " + ad::shape_str(context.shape()));
  }
  const auto & wz = param(params, "gru.W_z");
  const auto & uz = param(params, "gru.U_z");
  const auto & bz = param(params, "gru.b_z");
  const auto & wr = param(params, "gru.W_r");
  const auto & ur = param(params, "gru.U_r");
  const auto & br = param(params, "gru.b_r");
  const auto & wh = param(params, "gru.W_h");
  const auto & uh = param(params, "gru.U_h");
  const auto & bh = param(params, "gru.b_h");

  ad::Tensor h = context;
  ad::Tensor w = ad::Tensor::zeros({1, 2});
  std::vector<ad::Tensor> points;
  std::vector<ad::Tensor> deltas;
  points.reserve(config.horizon);
  deltas.reserve(config.horizon);
  for (std::size_t t = 0; t < config.horizon; ++t) {
    const auto x = linear(params, "gru.in", ad::scale(w, config.waypoint_input_scale));
    const auto z = ad::sigmoid(ad::add(ad::add(ad::matmul(x, wz), ad::matmul(h, uz)), bz));
    const auto r = ad::sigmoid(ad::add(ad::add(ad::matmul(x, wr), ad::matmul(h, ur)), br));
    const auto candidate =
      ad::tanh(ad::add(ad::add(ad::matmul(x, wh), ad::matmul(ad::mul(r, h), uh)), bh));
    h = ad::add(h, ad::mul(z, ad::sub(candidate, h)));
    const auto delta = linear(params, "head", h);
    w = ad::add(w, delta);
    deltas.push_back(delta);
    points.push_back(w);
  }
  return {ad::concat(points, 0), ad::concat(deltas, 0)};
}

ad::Tensor decode_waypoints(
  const ModelConfig & config, const Parameters & params, const ad::Tensor & context)
{
  return decode(config, params, context).waypoints;
}

Model::Model(ModelConfig config, FrozenEncoder encoder, Parameters params, std::uint64_t seed)
: config_(std::move(config)), encoder_(std::move(encoder)), params_(std::move(params)), seed_(seed)
{
  check_matches(config_, params_);
}

Model Model::create(const ModelConfig & config, std::uint64_t seed)
{
  config.validate();
  return Model(
    config, FrozenEncoder::stub(config, derive_seed(seed, "encoder")),
    init_parameters(config, derive_seed(seed, "init")), seed);
}

ad::Tensor Model::forward(const data::Scenario & scenario) const
{
  const auto views = encoder_.encode(scenario);
  const auto fused = adapt(config_, params_, views);
  const auto intent = embed_intent(config_, params_, scenario.intent);
  const auto past = embed_past(config_, params_, scenario.past_states);
  const auto context = plan(config_, params_, fused, intent, past);
  return decode_waypoints(config_, params_, context);
}

Trajectory Model::predict(const data::Scenario & scenario) const
{
  ad::NoGradGuard guard;
  return to_trajectory(forward(scenario), config_.dt);
}

void Model::save(const std::filesystem::path & path) const
{
  TensorArchive archive;
  archive.metadata["kind"] = "checkpoint";
  archive.metadata["format_version"] = 1;
  archive.metadata["seed"] = seed_;
  archive.metadata["model"] = config_;
  nlohmann::ordered_json enc;
  enc["mode"] = encoder_.mode() == FrozenEncoder::Mode::kStub ? "stub" : "precomputed";
  enc["seed"] = encoder_.seed();
  archive.metadata["encoder"] = enc;
  for (const auto & [name, t] : params_) {
    archive.tensors.emplace(name, t);
  }
  save_archive(path, archive);
}

Model Model::load(const std::filesystem::path & path)
{
  TensorArchive archive = load_archive(path);
  const auto & meta = archive.metadata;
  if (meta.value("kind", "") != "checkpoint") {
    throw IngestionError("checkpoint " + path.string() + ": not a checkpoint archive");
  }
  ModelConfig config;
  std::uint64_t seed = 0;
  std::string mode;
  std::uint64_t enc_seed = 0;
  try {
    config = meta.at("model").get<ModelConfig>();
    seed = meta.at("seed").get<std::uint64_t>();
    mode = meta.at("encoder").at("mode").get<std::string>();
    enc_seed = meta.at("encoder").at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception & e) {
    throw IngestionError("checkpoint " + path.string() + ": bad metadata: " + e.what());
  }
  try {
    config.validate();
  } catch (const ContractViolation & e) {
    throw IngestionError("checkpoint " + path.string() + ": " + e.what());
  }
  FrozenEncoder encoder = mode == "stub" ? FrozenEncoder::stub(config, enc_seed)
                         : mode == "precomputed"
                           ? FrozenEncoder::precomputed(config)
                           : throw IngestionError("checkpoint: unknown encoder mode " + mode);
  Parameters params;
  for (auto & [name, t] : archive.tensors) {
    t.set_requires_grad(true);
    params.emplace(name, t);
  }
  try {
    return Model(config, std::move(encoder), std::move(params), seed);
  } catch (const ContractViolation & e) {
    throw IngestionError("checkpoint " + path.string() + ": " + e.what());
  }
}

Trajectory to_trajectory(const ad::Tensor & waypoints, double dt)
{
  if (waypoints.rank() != 2 || waypoints.cols() != 2) {
    throw ContractViolation("to_trajectory: expected (H x 2), got " + ad::shape_str(waypoints.shape()));
  }
  Trajectory traj;
  traj.dt = dt;
  traj.waypoints.reserve(waypoints.rows());
  for (std::size_t i = 0; i < waypoints.rows(); ++i) {
    traj.waypoints.push_back({waypoints.at(i, 0), waypoints.at(i, 1)});
  }
  return traj;
}

}  // namespace rfsdrive::model
