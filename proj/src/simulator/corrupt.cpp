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

#include "mcforge/simulator/corrupt.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mcforge/core/fft.hpp"

namespace mcforge {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_states(const ComplexGrid& img, const MotionTrajectory& m) {
  if (m.size() != img.height()) {
    throw DimensionError("trajectory has " + std::to_string(m.size()) +
                         " states but the image has " + std::to_string(img.height()) +
                         " phase-encode lines");
  }
}

Complex translation_ramp(const SamplePoint& k, const RigidState& s) {
  return std::polar(1.0, -kTwoPi * (k.kx * s.tx + k.ky * s.ty));
}

}  // namespace

SamplePoint nominal_point(std::size_t row, std::size_t col, std::size_t height,
                          std::size_t width) {
  return {(static_cast<double>(col) - static_cast<double>(width / 2)) / static_cast<double>(width),
          (static_cast<double>(row) - static_cast<double>(height / 2)) /
              static_cast<double>(height)};
}

SamplePoint rotate_point(const SamplePoint& k, double theta_deg) {
  const double t = theta_deg * kDegToRad;
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {c * k.kx + s * k.ky, -s * k.kx + c * k.ky};
}

ComplexGrid corrupt_kspace(const ComplexGrid& img, const MotionTrajectory& m,
                           const CorruptionOptions& opt) {
  check_states(img, m);
  const auto spectrum = make_spectrum(img, opt);
  const std::size_t h = img.height();
  const std::size_t w = img.width();
  ComplexGrid out(h, w);
  const auto rows = static_cast<std::ptrdiff_t>(h);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < rows; ++j) {
    const RigidState& s = m.states[j];
    for (std::size_t u = 0; u < w; ++u) {
      const SamplePoint k = nominal_point(j, u, h, w);
      const SamplePoint kr = s.theta == 0.0 ? k : rotate_point(k, s.theta);
      const Complex value = in_band(kr) ? spectrum->evaluate(kr) : Complex{};
      out(j, u) = value * translation_ramp(k, s);
    }
  }
  return out;
}

ComplexGrid corrupt_kspace_reference(const ComplexGrid& img, const MotionTrajectory& m) {
  check_states(img, m);
  const std::size_t h = img.height();
  const std::size_t w = img.width();
  ComplexGrid out(h, w);
  std::vector<SamplePoint> line;
  for (std::size_t j = 0; j < h; ++j) {
    const RigidState& s = m.states[j];
    line.clear();
    std::vector<std::size_t> cols;
    for (std::size_t u = 0; u < w; ++u) {
      const SamplePoint kr = rotate_point(nominal_point(j, u, h, w), s.theta);
      if (in_band(kr)) {
        line.push_back(kr);
        cols.push_back(u);
      }
    }
    const auto values = dft_eval_oracle(img, line);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      out(j, cols[i]) = values[i] * translation_ramp(nominal_point(j, cols[i], h, w), s);
    }
  }
  return out;
}

ComplexGrid corrupt_complex(const Image2D& img, const MotionTrajectory& m,
                            const CorruptionOptions& opt) {
  return ifft2(corrupt_kspace(to_complex(img), m, opt));
}

Image2D corrupt(const Image2D& img, const MotionTrajectory& m, const CorruptionOptions& opt) {
  return magnitude(corrupt_complex(img, m, opt));
}

Image2D rotate_bilinear(const Image2D& img, double theta_deg) {
  const double t = theta_deg * kDegToRad;
  const double c = std::cos(t);
  const double s = std::sin(t);
  const auto cy = static_cast<double>(img.height() / 2);
  const auto cx = static_cast<double>(img.width() / 2);
  const auto h = static_cast<std::ptrdiff_t>(img.height());
  const auto w = static_cast<std::ptrdiff_t>(img.width());
  auto sample = [&](std::ptrdiff_t y, std::ptrdiff_t x) {
    return (y < 0 || y >= h || x < 0 || x >= w) ? 0.0 : img(y, x);
  };
  Image2D out(img.height(), img.width());
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      // Source location: R(-theta) applied to the centered output coordinate.
      const double dx = static_cast<double>(x) - cx;
      const double dy = static_cast<double>(y) - cy;
      const double sx = c * dx + s * dy + cx;
      const double sy = -s * dx + c * dy + cy;
      const auto x0 = static_cast<std::ptrdiff_t>(std::floor(sx));
      const auto y0 = static_cast<std::ptrdiff_t>(std::floor(sy));
      const double fx = sx - static_cast<double>(x0);
      const double fy = sy - static_cast<double>(y0);
      out(y, x) = (1 - fy) * ((1 - fx) * sample(y0, x0) + fx * sample(y0, x0 + 1)) +
                  fy * ((1 - fx) * sample(y0 + 1, x0) + fx * sample(y0 + 1, x0 + 1));
    }
  }
  return out;
}

Image2D circular_shift(const Image2D& img, long tx, long ty) {
  const auto h = static_cast<long>(img.height());
  const auto w = static_cast<long>(img.width());
  Image2D out(img.height(), img.width());
  for (long y = 0; y < h; ++y) {
    const long sy = ((y - ty) % h + h) % h;
    for (long x = 0; x < w; ++x) {
      const long sx = ((x - tx) % w + w) % w;
      out(y, x) = img(sy, sx);
    }
  }
  return out;
}

}  // namespace mcforge
