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

#include "mcforge/network/net.hpp"

namespace mcforge {

// "MCP1" checkpoint: magic, u32 depth, u32 base_channels, u8 variant
// (0 = U, 1 = U+O), then every parameter tensor in declaration order (each
// layer's weights, then its biases) as little-endian float64.
void save_checkpoint(const std::filesystem::path& path, const NetParams& params);
NetParams load_checkpoint(const std::filesystem::path& path);

}  // namespace mcforge
