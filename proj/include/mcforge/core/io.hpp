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

#pragma once

#include <filesystem>

#include "mcforge/core/image.hpp"

namespace mcforge {

// Native "MCF1" container:
//   bytes 0-3   magic "MCF1"
//   bytes 4-7   u32 height (little-endian)
//   bytes 8-11  u32 width
//   byte  12    u8 kind: 0 = real float64, 1 = complex (re, im) float64 pairs
//   then H*W samples, row-major, little-endian IEEE-754.
void save_image(const std::filesystem::path& path, const Image2D& img);
Image2D load_image(const std::filesystem::path& path);
void save_grid(const std::filesystem::path& path, const ComplexGrid& grid);
ComplexGrid load_grid(const std::filesystem::path& path);

// Binary portable graymap (P5). Export clamps to [0, 1] and quantizes with
// round(v * maxval); import divides by maxval.
void save_pgm(const std::filesystem::path& path, const Image2D& img, int bit_depth = 8);
Image2D load_pgm(const std::filesystem::path& path);

// Dispatches on extension: ".pgm" uses the graymap codec, anything else MCF1.
Image2D load_any_image(const std::filesystem::path& path);
void save_any_image(const std::filesystem::path& path, const Image2D& img);

}  // namespace mcforge
