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

#ifndef RFSDRIVE__MODEL__ARCHIVE_HPP_
#define RFSDRIVE__MODEL__ARCHIVE_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "rfsdrive/autodiff/tensor.hpp"

namespace rfsdrive::model
{

/// Self-describing container of named tensors plus JSON metadata.
///
/// Layout (all integers little-endian):
///   magic    8 bytes  "RFSDARC1"
///   meta_len u64, metadata UTF-8 JSON
///   count    u64
///   per tensor, in name order:
///     name_len u32, name bytes, rank u32, dims u64 x rank,
///     values f64 (IEEE-754 bit pattern, little-endian) x product(dims)
///   crc32    u32 over every preceding byte
struct TensorArchive
{
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
  std::map<std::string, ad::Tensor> tensors;
};

std::string encode_archive(const TensorArchive & archive);
/// IngestionError on bad magic, truncation, checksum mismatch or bad shapes.
TensorArchive decode_archive(std::string_view bytes);

void save_archive(const std::filesystem::path & path, const TensorArchive & archive);
TensorArchive load_archive(const std::filesystem::path & path);

}  // namespace rfsdrive::model

#endif  // RFSDRIVE__MODEL__ARCHIVE_HPP_
