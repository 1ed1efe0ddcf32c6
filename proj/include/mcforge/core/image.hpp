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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "mcforge/core/error.hpp"

namespace mcforge {

using Complex = std::complex<double>;

// Row-major H x W grid. Image2D and ComplexGrid are the two instantiations
// used throughout: real intensities and centered k-space samples.
template <typename T>
class Grid2D {
 public:
  using value_type = T;

  Grid2D() = default;

  Grid2D(std::size_t height, std::size_t width, T fill = T{})
      : height_(height), width_(width), data_(checked_size(height, width), fill) {}

  Grid2D(std::size_t height, std::size_t width, std::vector<T> data)
      : height_(height), width_(width), data_(std::move(data)) {
    if (data_.size() != checked_size(height, width)) {
      throw DimensionError("grid data length " + std::to_string(data_.size()) +
                           " does not match " + std::to_string(height) + "x" +
                           std::to_string(width));
    }
  }

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t row, std::size_t col) noexcept { return data_[row * width_ + col]; }
  const T& operator()(std::size_t row, std::size_t col) const noexcept {
    return data_[row * width_ + col];
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }
  std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * width_, width_}; }
  std::span<const T> row(std::size_t r) const noexcept {
    return {data_.data() + r * width_, width_};
  }

  const std::vector<T>& values() const noexcept { return data_; }

  bool same_shape(const Grid2D& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }
  template <typename U>
  bool same_shape(const Grid2D<U>& other) const noexcept {
    return height_ == other.height() && width_ == other.width();
  }

  friend bool operator==(const Grid2D& a, const Grid2D& b) = default;

 private:
  static std::size_t checked_size(std::size_t h, std::size_t w) {
    if (h == 0 || w == 0) {
      throw DimensionError("grid dimensions must be at least 1x1");
    }
    return h * w;
  }

  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<T> data_;
};

using Image2D = Grid2D<double>;
using ComplexGrid = Grid2D<Complex>;

template <typename A, typename B>
void require_same_shape(const Grid2D<A>& a, const Grid2D<B>& b, const char* what) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.height()) +
                         "x" + std::to_string(a.width()) + " vs " + std::to_string(b.height()) +
                         "x" + std::to_string(b.width()));
  }
}

/// Min-max rescale to [0, 1]; a constant image maps to all zeros.
Image2D normalize(const Image2D& img);

/// Mirror image: out(y, x) = in(vertical ? H-1-y : y, horizontal ? W-1-x : x).
Image2D flip(const Image2D& img, bool horizontal, bool vertical);

ComplexGrid to_complex(const Image2D& img);
Image2D magnitude(const ComplexGrid& grid);
Image2D real_part(const ComplexGrid& grid);

}  // namespace mcforge
