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

#include <limits>
#include <span>

#include "mcforge/core/image.hpp"

namespace mcforge {

enum class SsimMode { Global, Windowed };

struct SsimConfig {
  SsimMode mode = SsimMode::Windowed;
  int window = 11;       // Gaussian window side (windowed mode)
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;

  double c1() const noexcept { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const noexcept { return (k2 * dynamic_range) * (k2 * dynamic_range); }
};

/// Structural similarity. Global mode evaluates the index once over the whole
/// image; windowed mode averages the index map over every valid window
/// position (no padding).
double ssim(const Image2D& x, const Image2D& y, const SsimConfig& cfg = {});

inline constexpr double kPsnrInfinity = std::numeric_limits<double>::infinity();

/// 10 log10(max^2 / MSE) in dB; identical images give kPsnrInfinity.
double psnr(const Image2D& x, const Image2D& ref, double max_value = 1.0);

double mean_squared_error(const Image2D& x, const Image2D& ref);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population
};

MeanStd mean_std(std::span<const double> values);

}  // namespace mcforge
