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

#include <cstddef>
#include <span>
#include <vector>

namespace mcforge {

/// Channel-major (C, H, W) activation buffer.
struct Tensor {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::size_t c, std::size_t h, std::size_t w, double fill = 0.0)
      : channels(c), height(h), width(w), data(c * h * w, fill) {}

  std::size_t plane() const noexcept { return height * width; }
  std::span<double> channel(std::size_t c) noexcept { return {data.data() + c * plane(), plane()}; }
  std::span<const double> channel(std::size_t c) const noexcept {
    return {data.data() + c * plane(), plane()};
  }
  double& at(std::size_t c, std::size_t y, std::size_t x) noexcept {
    return data[(c * height + y) * width + x];
  }
  double at(std::size_t c, std::size_t y, std::size_t x) const noexcept {
    return data[(c * height + y) * width + x];
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;
};

}  // namespace mcforge
