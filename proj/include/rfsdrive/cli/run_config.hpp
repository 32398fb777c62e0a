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

#ifndef RFSDRIVE__CLI__RUN_CONFIG_HPP_
#define RFSDRIVE__CLI__RUN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rfsdrive/model/config.hpp"
#include "rfsdrive/rfs_loss.hpp"
#include "rfsdrive/train/trainer.hpp"

namespace rfsdrive::cli
{

/// Everything a run depends on besides its input files.
struct RunConfig
{
  std::uint64_t seed = 0;
  model::ModelConfig model{};
  LossConfig loss{};
  train::TrainConfig train{};
};

/// Every recognized key, in the order to_text writes them.
std::vector<std::string> config_keys();

/// Sets one key. ConfigError for unknown keys or unparsable values.
void set_value(RunConfig & config, std::string_view key, std::string_view value);
std::string get_value(const RunConfig & config, std::string_view key);

/// Flat "key = value" lines; '#' starts a comment; blank lines are ignored.
/// A key given twice is a conflict.
void apply_text(RunConfig & config, std::string_view text, const std::string & origin);
void apply_file(RunConfig & config, const std::filesystem::path & path);
/// "key=value" override.
void apply_override(RunConfig & config, std::string_view assignment);

/// Validates every section and copies the root seed into the train section.
void resolve(RunConfig & config);

/// Canonical listing of every key, parseable by apply_text.
std::string to_text(const RunConfig & config);
void write_echo(const std::filesystem::path & dir, const RunConfig & config);

}  // namespace rfsdrive::cli

#endif  // RFSDRIVE__CLI__RUN_CONFIG_HPP_
