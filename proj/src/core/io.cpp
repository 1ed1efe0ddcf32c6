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

#include "mcforge/core/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace mcforge {
namespace {

constexpr char kMagic[4] = {'M', 'C', 'F', '1'};
constexpr std::size_t kHeaderSize = 13;
enum class Kind : std::uint8_t { Real = 0, Complex = 1 };

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string() + " for reading");
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_all(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
}

void put_f64(std::vector<unsigned char>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<unsigned char>(bits >> (8 * i)));
  }
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  }
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  }
  return std::bit_cast<double>(bits);
}

std::vector<unsigned char> header(std::size_t h, std::size_t w, Kind kind) {
  if (h > UINT32_MAX || w > UINT32_MAX) {
    throw DimensionError("grid too large for MCF1");
  }
  std::vector<unsigned char> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, static_cast<std::uint32_t>(h));
  put_u32(out, static_cast<std::uint32_t>(w));
  out.push_back(static_cast<unsigned char>(kind));
  return out;
}

struct Parsed {
  std::size_t height;
  std::size_t width;
  const unsigned char* payload;
};

Parsed parse_header(const std::vector<unsigned char>& bytes, Kind expected) {
  if (bytes.size() < 4) {
    throw FormatError("truncated MCF1 magic", bytes.size());
  }
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw FormatError("bad MCF1 magic", 0);
  }
  if (bytes.size() < kHeaderSize) {
    throw FormatError("truncated MCF1 header", bytes.size());
  }
  const std::size_t h = get_u32(&bytes[4]);
  const std::size_t w = get_u32(&bytes[8]);
  if (h == 0) {
    throw FormatError("zero height", 4);
  }
  if (w == 0) {
    throw FormatError("zero width", 8);
  }
  const auto kind = bytes[12];
  if (kind > 1) {
    throw FormatError("unknown sample kind " + std::to_string(kind), 12);
  }
  if (static_cast<Kind>(kind) != expected) {
    throw DimensionError(expected == Kind::Real ? "MCF1 file holds complex data, expected real"
                                                : "MCF1 file holds real data, expected complex");
  }
  const std::size_t sample_bytes = expected == Kind::Real ? 8 : 16;
  const std::size_t need = kHeaderSize + h * w * sample_bytes;
  if (bytes.size() < need) {
    throw FormatError("truncated MCF1 payload", bytes.size());
  }
  if (bytes.size() > need) {
    throw FormatError("trailing bytes after MCF1 payload", need);
  }
  return {h, w, bytes.data() + kHeaderSize};
}

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

// Reads one whitespace-delimited decimal header field, skipping '#' comments.
std::size_t pgm_field(const std::vector<unsigned char>& bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    if (is_space(bytes[pos])) {
      ++pos;
    } else if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') {
        ++pos;
      }
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  std::size_t value = 0;
  while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
    value = value * 10 + (bytes[pos] - '0');
    if (value > 1'000'000'000) {
      throw FormatError("PGM header value out of range", start);
    }
    ++pos;
  }
  if (pos == start) {
    throw FormatError("expected decimal PGM header field", pos);
  }
  return value;
}

}  // namespace

void save_image(const std::filesystem::path& path, const Image2D& img) {
  auto bytes = header(img.height(), img.width(), Kind::Real);
  bytes.reserve(kHeaderSize + img.size() * 8);
  for (double v : img.data()) {
    put_f64(bytes, v);
  }
  write_all(path, bytes);
}

Image2D load_image(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  const auto p = parse_header(bytes, Kind::Real);
  std::vector<double> data(p.height * p.width);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = get_f64(p.payload + 8 * i);
  }
  return Image2D(p.height, p.width, std::move(data));
}

void save_grid(const std::filesystem::path& path, const ComplexGrid& grid) {
  auto bytes = header(grid.height(), grid.width(), Kind::Complex);
  bytes.reserve(kHeaderSize + grid.size() * 16);
  for (const Complex& v : grid.data()) {
    put_f64(bytes, v.real());
    put_f64(bytes, v.imag());
  }
  write_all(path, bytes);
}

ComplexGrid load_grid(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  const auto p = parse_header(bytes, Kind::Complex);
  std::vector<Complex> data(p.height * p.width);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = Complex(get_f64(p.payload + 16 * i), get_f64(p.payload + 16 * i + 8));
  }
  return ComplexGrid(p.height, p.width, std::move(data));
}

void save_pgm(const std::filesystem::path& path, const Image2D& img, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) {
    throw ParameterError("PGM bit depth must be 8 or 16");
  }
  const int maxval = bit_depth == 8 ? 255 : 65535;
  const std::string hdr = "P5\n" + std::to_string(img.width()) + " " +
                          std::to_string(img.height()) + "\n" + std::to_string(maxval) + "\n";
  std::vector<unsigned char> bytes(hdr.begin(), hdr.end());
  for (double v : img.data()) {
    const double clamped = std::clamp(std::isnan(v) ? 0.0 : v, 0.0, 1.0);
    const auto q = static_cast<unsigned>(std::lround(clamped * maxval));
    if (bit_depth == 16) {
      bytes.push_back(static_cast<unsigned char>(q >> 8));  // big-endian per netpbm
    }
    bytes.push_back(static_cast<unsigned char>(q & 0xFF));
  }
  write_all(path, bytes);
}

Image2D load_pgm(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw FormatError("not a binary PGM (P5)", 0);
  }
  std::size_t pos = 2;
  const std::size_t w = pgm_field(bytes, pos);
  const std::size_t h = pgm_field(bytes, pos);
  const std::size_t maxval_at = pos;
  const std::size_t maxval = pgm_field(bytes, pos);
  if (w == 0 || h == 0) {
    throw FormatError("zero PGM dimension", 2);
  }
  if (maxval == 0 || maxval > 65535) {
    throw FormatError("PGM maxval out of range", maxval_at);
  }
  if (pos >= bytes.size() || !is_space(bytes[pos])) {
    throw FormatError("missing whitespace after PGM header", pos);
  }
  ++pos;
  const std::size_t bps = maxval > 255 ? 2 : 1;
  if (bytes.size() - pos < w * h * bps) {
    throw FormatError("truncated PGM payload", bytes.size());
  }
  std::vector<double> data(w * h);
  for (std::size_t i = 0; i < data.size(); ++i) {
    unsigned q = bytes[pos + i * bps];
    if (bps == 2) {
      q = (q << 8) | bytes[pos + i * bps + 1];
    }
    data[i] = static_cast<double>(q) / static_cast<double>(maxval);
  }
  return Image2D(h, w, std::move(data));
}

Image2D load_any_image(const std::filesystem::path& path) {
  return path.extension() == ".pgm" ? load_pgm(path) : load_image(path);
}

void save_any_image(const std::filesystem::path& path, const Image2D& img) {
  if (path.extension() == ".pgm") {
    save_pgm(path, img);
  } else {
    save_image(path, img);
  }
}

}  // namespace mcforge
