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

#include "rfsdrive/cli/run_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "rfsdrive/errors.hpp"

namespace rfsdrive::cli
{

namespace
{

std::string_view trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v)
{
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text)
{
  T value{};
  const auto * end = text.data() + text.size();
  const auto r = std::from_chars(text.data(), end, value);
  if (r.ec != std::errc() || r.ptr != end) {
    throw ConfigError("config key " + std::string(key) + ": cannot parse \"" + std::string(text) + "\"");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text)
{
  if (text == "true") {
    return true;
  }
  if (text == "false") {
    return false;
  }
  throw ConfigError("config key " + std::string(key) + ": expected true or false");
}

struct Field
{
  std::function<void(RunConfig &, std::string_view)> set;
  std::function<std::string(const RunConfig &)> get;
};

template <typename T>
Field size_field(T RunConfig::*section, std::size_t T::*member, const char * key)
{
  return {
    [=](RunConfig & c, std::string_view v) { c.*section.*member = parse_number<std::size_t>(key, v); },
    [=](const RunConfig & c) { return std::to_string(c.*section.*member); }};
}

template <typename T>
Field real_field(T RunConfig::*section, double T::*member, const char * key)
{
  return {
    [=](RunConfig & c, std::string_view v) { c.*section.*member = parse_number<double>(key, v); },
    [=](const RunConfig & c) { return fmt(c.*section.*member); }};
}

template <typename T>
Field bool_field(T RunConfig::*section, bool T::*member, const char * key)
{
  return {
    [=](RunConfig & c, std::string_view v) { c.*section.*member = parse_bool(key, v); },
    [=](const RunConfig & c) { return std::string((c.*section.*member) ? "true" : "false"); }};
}

using FieldTable = std::vector<std::pair<std::string, Field>>;

const FieldTable & fields()
{
  using M = model::ModelConfig;
  using T = train::TrainConfig;
  static const FieldTable table = [] {
    FieldTable t;
    t.emplace_back("seed", Field{
      [](RunConfig & c, std::string_view v) { c.seed = parse_number<std::uint64_t>("seed", v); },
      [](const RunConfig & c) { return std::to_string(c.seed); }});
    const std::pair<const char *, std::size_t M::*> model_sizes[] = {
      {"model.n_cameras", &M::n_cameras},
      {"model.tokens_per_view", &M::tokens_per_view},
      {"model.d_img", &M::d_img},
      {"model.d_model", &M::d_model},
      {"model.n_queries", &M::n_queries},
      {"model.planner_layers", &M::planner_layers},
      {"model.heads", &M::heads},
      {"model.ffn_mult", &M::ffn_mult},
      {"model.horizon", &M::horizon},
      {"model.past_len", &M::past_len},
      {"model.n_intents", &M::n_intents},
      {"model.conv_kernel", &M::conv_kernel},
      {"model.scene_dim", &M::scene_dim},
    };
    for (const auto & [key, member] : model_sizes) {
      t.emplace_back(key, size_field(&RunConfig::model, member, key));
    }
    t.emplace_back("model.dt", real_field(&RunConfig::model, &M::dt, "model.dt"));
    t.emplace_back(
      "model.use_segment_embeddings",
      bool_field(&RunConfig::model, &M::use_segment_embeddings, "model.use_segment_embeddings"));
    t.emplace_back("model.past_scale", Field{
      [](RunConfig & c, std::string_view v) {
        std::size_t i = 0;
        while (true) {
          const auto comma = v.find(',');
          if (i >= c.model.past_scale.size()) {
            throw ConfigError("config key model.past_scale: expected 6 comma-separated reals");
          }
          c.model.past_scale[i++] = parse_number<double>("model.past_scale", trim(v.substr(0, comma)));
          if (comma == std::string_view::npos) {
            break;
          }
          v.remove_prefix(comma + 1);
        }
        if (i != c.model.past_scale.size()) {
          throw ConfigError("config key model.past_scale: expected 6 comma-separated reals");
        }
      },
      [](const RunConfig & c) {
        std::string out;
        for (std::size_t i = 0; i < c.model.past_scale.size(); ++i) {
          out += (i ? "," : "") + fmt(c.model.past_scale[i]);
        }
        return out;
      }});
    t.emplace_back(
      "model.waypoint_input_scale",
      real_field(&RunConfig::model, &M::waypoint_input_scale, "model.waypoint_input_scale"));

    t.emplace_back("loss.lat_floor", real_field(&RunConfig::loss, &LossConfig::lat_floor, "loss.lat_floor"));
    t.emplace_back("loss.lng_floor", real_field(&RunConfig::loss, &LossConfig::lng_floor, "loss.lng_floor"));
    t.emplace_back(
      "loss.use_speed_scaling",
      bool_field(&RunConfig::loss, &LossConfig::use_speed_scaling, "loss.use_speed_scaling"));

    t.emplace_back("train.steps", size_field(&RunConfig::train, &T::steps, "train.steps"));
    t.emplace_back("train.batch_size", size_field(&RunConfig::train, &T::batch_size, "train.batch_size"));
    t.emplace_back(
      "train.learning_rate", real_field(&RunConfig::train, &T::learning_rate, "train.learning_rate"));
    t.emplace_back("train.beta1", real_field(&RunConfig::train, &T::beta1, "train.beta1"));
    t.emplace_back("train.beta2", real_field(&RunConfig::train, &T::beta2, "train.beta2"));
    t.emplace_back("train.adam_eps", real_field(&RunConfig::train, &T::adam_eps, "train.adam_eps"));
    t.emplace_back(
      "train.grad_clip_norm", real_field(&RunConfig::train, &T::grad_clip_norm, "train.grad_clip_norm"));
    t.emplace_back("train.eval_every", size_field(&RunConfig::train, &T::eval_every, "train.eval_every"));
    return t;
  }();
  return table;
}

const Field & find_field(std::string_view key)
{
  for (const auto & [name, field] : fields()) {
    if (name == key) {
      return field;
    }
  }
  throw ConfigError("unknown config key \"" + std::string(key) + "\"");
}

}  // namespace

std::vector<std::string> config_keys()
{
  std::vector<std::string> keys;
  for (const auto & [name, field] : fields()) {
    keys.push_back(name);
  }
  return keys;
}

void set_value(RunConfig & config, std::string_view key, std::string_view value)
{
  find_field(key).set(config, value);
}

std::string get_value(const RunConfig & config, std::string_view key)
{
  return find_field(key).get(config);
}

void apply_text(RunConfig & config, std::string_view text, const std::string & origin)
{
  std::map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    if (const auto it = seen.find(key); it != seen.end()) {
      throw ConfigError(
        origin + ":" + std::to_string(line_no) + ": key " + key + " conflicts with line " +
        std::to_string(it->second));
    }
    seen.emplace(key, line_no);
    try {
      set_value(config, key, value);
    } catch (const ConfigError & e) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_file(RunConfig & config, const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open config file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_text(config, ss.str(), path.string());
}

void apply_override(RunConfig & config, std::string_view assignment)
{
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override \"" + std::string(assignment) + "\" is not key=value");
  }
  set_value(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void resolve(RunConfig & config)
{
  config.train.seed = config.seed;
  try {
    config.model.validate();
    config.loss.validate();
    config.train.validate();
  } catch (const ContractViolation & e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
}

std::string to_text(const RunConfig & config)
{
  std::string out = "# resolved run configuration\n";
  for (const auto & [name, field] : fields()) {
    out += name + " = " + field.get(config) + "\n";
  }
  return out;
}

void write_echo(const std::filesystem::path & dir, const RunConfig & config)
{
  std::filesystem::create_directories(dir);
  const auto path = dir / "run_config.cfg";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << to_text(config);
}

}  // namespace rfsdrive::cli
