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

#include "mcforge/simulator/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace mcforge {

PhantomKind parse_phantom_kind(std::string_view name) {
  if (name == "shepp_logan") return PhantomKind::SheppLogan;
  if (name == "random_ellipses") return PhantomKind::RandomEllipses;
  throw ParameterError("unknown phantom kind '" + std::string(name) + "'");
}

const std::vector<Ellipse>& shepp_logan_ellipses() {
  static const std::vector<Ellipse> table = {
      {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
      {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
      {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
      {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
      {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
      {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
      {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
      {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
      {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
      {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
  };
  return table;
}

Image2D rasterize_ellipses(const std::vector<Ellipse>& ellipses, std::size_t size) {
  Image2D img(size, size, 0.0);
  const auto n = static_cast<double>(size);
  for (const auto& e : ellipses) {
    const double phi = e.angle_deg * std::numbers::pi / 180.0;
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    for (std::size_t row = 0; row < size; ++row) {
      const double y = (n - 2.0 * static_cast<double>(row) - 1.0) / n - e.center_y;
      for (std::size_t col = 0; col < size; ++col) {
        const double x = (2.0 * static_cast<double>(col) + 1.0 - n) / n - e.center_x;
        const double u = (x * c + y * s) / e.semi_x;
        const double v = (-x * s + y * c) / e.semi_y;
        if (u * u + v * v <= 1.0) {
          img(row, col) += e.intensity;
        }
      }
    }
  }
  return img;
}

Image2D gaussian_blur(const Image2D& img, double sigma) {
  if (sigma < 0.0) {
    throw ParameterError("blur sigma must be non-negative");
  }
  if (sigma == 0.0) {
    return img;
  }
  const auto radius = static_cast<long>(std::ceil(4.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double total = 0.0;
  for (long i = -radius; i <= radius; ++i) {
    taps[i + radius] = std::exp(-0.5 * static_cast<double>(i * i) / (sigma * sigma));
    total += taps[i + radius];
  }
  for (auto& t : taps) t /= total;

  const auto h = static_cast<long>(img.height());
  const auto w = static_cast<long>(img.width());
  Image2D tmp(img.height(), img.width(), 0.0);
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      double acc = 0.0;
      for (long i = std::max(-radius, -x); i <= std::min(radius, w - 1 - x); ++i) {
        acc += taps[i + radius] * img(y, x + i);
      }
      tmp(y, x) = acc;
    }
  }
  Image2D out(img.height(), img.width(), 0.0);
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      double acc = 0.0;
      for (long i = std::max(-radius, -y); i <= std::min(radius, h - 1 - y); ++i) {
        acc += taps[i + radius] * tmp(y + i, x);
      }
      out(y, x) = acc;
    }
  }
  return out;
}

Image2D phantom(PhantomKind kind, std::size_t size, std::uint64_t seed, double psf_sigma) {
  if (size < 16) {
    throw ParameterError("phantom size must be at least 16, got " + std::to_string(size));
  }
  if (kind == PhantomKind::SheppLogan) {
    auto img = gaussian_blur(rasterize_ellipses(shepp_logan_ellipses(), size), psf_sigma);
    for (auto& v : img.data()) {
      v = std::clamp(v, 0.0, 1.0);
    }
    return img;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  std::vector<Ellipse> ellipses;
  const double head_x = uniform(0.65, 0.9);
  const double head_y = uniform(0.75, 0.95);
  ellipses.push_back({uniform(0.25, 0.5), head_x, head_y, uniform(-0.05, 0.05),
                      uniform(-0.05, 0.05), uniform(-15.0, 15.0)});
  const int inner = std::uniform_int_distribution<int>(4, 11)(rng);
  for (int i = 0; i < inner; ++i) {
    const double r = std::sqrt(unit(rng)) * 0.6;
    const double a = uniform(0.0, 2.0 * std::numbers::pi);
    ellipses.push_back({uniform(-0.3, 0.5), uniform(0.05, 0.35), uniform(0.05, 0.35),
                        r * head_x * std::cos(a), r * head_y * std::sin(a),
                        uniform(0.0, 180.0)});
  }
  auto img = gaussian_blur(rasterize_ellipses(ellipses, size), psf_sigma);
  for (auto& v : img.data()) {
    v = std::max(v, 0.0);
  }
  return normalize(img);
}

}  // namespace mcforge
