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

#include <cstdint>
#include <string_view>
#include <vector>

#include "mcforge/core/image.hpp"

namespace mcforge {

enum class PhantomKind { SheppLogan, RandomEllipses };

PhantomKind parse_phantom_kind(std::string_view name);

/// Ellipse in normalized field-of-view coordinates: x and y span [-1, 1],
/// x to the right, y upward (row 0 is the top of the image).
struct Ellipse {
  double intensity;
  double semi_x;
  double semi_y;
  double center_x;
  double center_y;
  double angle_deg;
};

/// Modified (Toft) Shepp-Logan table; intensities already lie in [0, 1].
const std::vector<Ellipse>& shepp_logan_ellipses();

/// Additive rasterization sampled at pixel centers.
Image2D rasterize_ellipses(const std::vector<Ellipse>& ellipses, std::size_t size);

/// Separable Gaussian blur with zero padding; sigma in pixels, 0 is a no-op.
Image2D gaussian_blur(const Image2D& img, double sigma);

/// Default Gaussian point-spread width (pixels) applied to rasterized phantoms.
inline constexpr double kPhantomPsfSigma = 1.0;

/// size >= 16. random_ellipses: a head-like outer ellipse plus 4-11 inner
/// ellipses (5-12 total), blurred and then min-max normalized. shepp_logan
/// is blurred and clamped to [0, 1]. Deterministic per seed.
Image2D phantom(PhantomKind kind, std::size_t size, std::uint64_t seed = 0,
                double psf_sigma = kPhantomPsfSigma);

}  // namespace mcforge
