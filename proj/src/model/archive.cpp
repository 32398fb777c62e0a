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

#include "rfsdrive/model/archive.hpp"

#include <zlib.h>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "rfsdrive/errors.hpp"

namespace rfsdrive::model
{

namespace
{

constexpr std::string_view kMagic = "RFSDARC1";

template <typename T>
void put_le(std::string & out, T value)
{
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xffU));
  }
}

std::uint32_t crc32_of(std::string_view bytes)
{
  uLong crc = ::crc32(0L, Z_NULL, 0);
  crc = ::crc32(crc, reinterpret_cast<const Bytef *>(bytes.data()), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

class Reader
{
public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get()
  {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }

  std::string_view take(std::size_t n)
  {
    need(n);
    const auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t position() const { return pos_; }

private:
  void need(std::size_t n) const
  {
    if (bytes_.size() - pos_ < n) {
      throw IngestionError("archive: truncated");
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_archive(const TensorArchive & archive)
{
  std::string out(kMagic);
  const std::string meta = archive.metadata.dump();
  put_le<std::uint64_t>(out, meta.size());
  out += meta;
  put_le<std::uint64_t>(out, archive.tensors.size());
  for (const auto & [name, t] : archive.tensors) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.rank()));
    for (const auto d : t.shape()) {
      put_le<std::uint64_t>(out, d);
    }
    for (const double v : t.values()) {
      put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
    }
  }
  put_le<std::uint32_t>(out, crc32_of(out));
  return out;
}

TensorArchive decode_archive(std::string_view bytes)
{
  if (bytes.size() < kMagic.size() + 4 || bytes.substr(0, kMagic.size()) != kMagic) {
    throw IngestionError("archive: bad magic");
  }
  const std::string_view body = bytes.substr(0, bytes.size() - 4);
  Reader tail(bytes.substr(bytes.size() - 4));
  if (tail.get<std::uint32_t>() != crc32_of(body)) {
    throw IngestionError("archive: checksum mismatch");
  }
  Reader r(body);
  r.take(kMagic.size());
  TensorArchive archive;
  const auto meta_len = r.get<std::uint64_t>();
  try {
    archive.metadata = nlohmann::ordered_json::parse(r.take(meta_len));
  } catch (const nlohmann::json::parse_error & e) {
    throw IngestionError(std::string("archive: bad metadata: ") + e.what());
  }
  const auto count = r.get<std::uint64_t>();
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto name_len = r.get<std::uint32_t>();
    std::string name(r.take(name_len));
    const auto rank = r.get<std::uint32_t>();
    if (rank == 0 || rank > 8) {
      throw IngestionError("archive: tensor " + name + " has unsupported rank");
    }
    ad::Shape shape;
    std::size_t n = 1;
    for (std::uint32_t k = 0; k < rank; ++k) {
      const auto d = r.get<std::uint64_t>();
      if (d == 0 || d > (std::uint64_t{1} << 32)) {
        throw IngestionError("archive: tensor " + name + " has an invalid extent");
      }
      shape.push_back(static_cast<std::size_t>(d));
      n *= static_cast<std::size_t>(d);
    }
    std::vector<double> values(n);
    for (auto & v : values) {
      v = std::bit_cast<double>(r.get<std::uint64_t>());
    }
    archive.tensors.emplace(std::move(name), ad::Tensor::from(std::move(shape), std::move(values)));
  }
  if (r.position() != body.size()) {
    throw IngestionError("archive: trailing bytes");
  }
  return archive;
}

void save_archive(const std::filesystem::path & path, const TensorArchive & archive)
{
  const std::string bytes = encode_archive(archive);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

TensorArchive load_archive(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_archive(bytes);
}

}  // namespace rfsdrive::model
