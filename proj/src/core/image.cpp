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

#include "mcforge/core/image.hpp"

#include <algorithm>
#include <cmath>

namespace mcforge {

Image2D normalize(const Image2D& img) {
  if (img.empty()) {
    throw DimensionError("normalize: empty image");
  }
  const auto [lo_it, hi_it] = std::minmax_element(img.data().begin(), img.data().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  Image2D out(img.height(), img.width(), 0.0);
  if (hi == lo) {
    return out;
  }
  const double range = hi - lo;
  auto dst = out.data();
  auto src = img.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = (src[i] - lo) / range;
  }
  return out;
}

Image2D flip(const Image2D& img, bool horizontal, bool vertical) {
  const std::size_t h = img.height(), w = img.width();
  Image2D out(h, w);
  for (std::size_t y = 0; y < h; ++y) {
    const std::size_t sy = vertical ? h - 1 - y : y;
    for (std::size_t x = 0; x < w; ++x) out(y, x) = img(sy, horizontal ? w - 1 - x : x);
  }
  return out;
}

ComplexGrid to_complex(const Image2D& img) {
  ComplexGrid out(img.height(), img.width());
  std::copy(img.data().begin(), img.data().end(), out.data().begin());
  return out;
}

Image2D magnitude(const ComplexGrid& grid) {
  Image2D out(grid.height(), grid.width());
  std::transform(grid.data().begin(), grid.data().end(), out.data().begin(),
                 [](const Complex& c) { return std::abs(c); });
  return out;
}

Image2D real_part(const ComplexGrid& grid) {
  Image2D out(grid.height(), grid.width());
  std::transform(grid.data().begin(), grid.data().end(), out.data().begin(),
                 [](const Complex& c) { return c.real(); });
  return out;
}

}  // namespace mcforge
