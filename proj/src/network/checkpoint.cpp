/* Copyright 2026 The mcforge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mcforge/network/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <vector>

namespace mcforge {
namespace {

constexpr char kMagic[4] = {'M', 'C', 'P', '1'};
constexpr std::size_t kHeaderSize = 13;

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const NetParams& params) {
  std::vector<unsigned char> bytes(std::begin(kMagic), std::end(kMagic));
  auto put_u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<unsigned char>(v >> (8 * i)));
  };
  put_u32(static_cast<std::uint32_t>(params.spec.depth));
  put_u32(static_cast<std::uint32_t>(params.spec.base_channels));
  bytes.push_back(params.spec.variant == Variant::U ? 0 : 1);
  for (double v : params.values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<unsigned char>(bits >> (8 * i)));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

NetParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                         std::istreambuf_iterator<char>()};
  if (bytes.size() < 4 || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw FormatError("bad MCP1 magic", 0);
  }
  if (bytes.size() < kHeaderSize) throw FormatError("truncated MCP1 header", bytes.size());
  NetSpec spec;
  spec.depth = static_cast<int>(get_u32(&bytes[4]));
  spec.base_channels = static_cast<int>(get_u32(&bytes[8]));
  if (bytes[12] > 1) throw FormatError("unknown network variant", 12);
  spec.variant = bytes[12] == 0 ? Variant::U : Variant::UPlusO;
  try {
    validate(spec);
  } catch (const ParameterError& e) {
    throw FormatError(std::string("invalid network header: ") + e.what(), 4);
  }
  NetParams params(spec);
  const std::size_t need = kHeaderSize + 8 * params.values.size();
  if (bytes.size() < need) throw FormatError("truncated MCP1 parameters", bytes.size());
  if (bytes.size() > need) throw FormatError("trailing bytes after MCP1 parameters", need);
  for (std::size_t i = 0; i < params.values.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= static_cast<std::uint64_t>(bytes[kHeaderSize + 8 * i + b]) << (8 * b);
    }
    params.values[i] = std::bit_cast<double>(bits);
  }
  return params;
}

}  // namespace mcforge
