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

#include "mcforge/metrics/metrics.hpp"

#include <cmath>
#include <vector>

namespace mcforge {
namespace {

double ssim_index(double mx, double my, double vx, double vy, double cxy, double c1, double c2) {
  return ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
}

double ssim_global(const Image2D& x, const Image2D& y, const SsimConfig& cfg) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x.data()[i];
    my += y.data()[i];
  }
  mx /= n;
  my /= n;
  double vx = 0.0, vy = 0.0, cxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x.data()[i] - mx;
    const double dy = y.data()[i] - my;
    vx += dx * dx;
    vy += dy * dy;
    cxy += dx * dy;
  }
  return ssim_index(mx, my, vx / n, vy / n, cxy / n, cfg.c1(), cfg.c2());
}

std::vector<double> gaussian_window(int size, double sigma) {
  std::vector<double> g(size);
  const double c = 0.5 * (size - 1);
  double total = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - c;
    g[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    total += g[i];
  }
  for (auto& v : g) v /= total;
  return g;
}

// Separable "valid" filtering of one map.
std::vector<double> filter_valid(const std::vector<double>& src, std::size_t h, std::size_t w,
                                 const std::vector<double>& g) {
  const std::size_t k = g.size();
  const std::size_t oh = h - k + 1;
  const std::size_t ow = w - k + 1;
  std::vector<double> tmp(h * ow);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (std::size_t t = 0; t < k; ++t) acc += g[t] * src[r * w + c + t];
      tmp[r * ow + c] = acc;
    }
  }
  std::vector<double> out(oh * ow);
  for (std::size_t r = 0; r < oh; ++r) {
    for (std::size_t c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (std::size_t t = 0; t < k; ++t) acc += g[t] * tmp[(r + t) * ow + c];
      out[r * ow + c] = acc;
    }
  }
  return out;
}

double ssim_windowed(const Image2D& x, const Image2D& y, const SsimConfig& cfg) {
  const auto k = static_cast<std::size_t>(cfg.window);
  if (cfg.window < 1 || x.height() < k || x.width() < k) {
    throw DimensionError("windowed SSIM: image smaller than the " + std::to_string(cfg.window) +
                         "x" + std::to_string(cfg.window) + " window");
  }
  const auto g = gaussian_window(cfg.window, cfg.sigma);
  const std::size_t h = x.height();
  const std::size_t w = x.width();
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  const std::vector<double> xv(x.data().begin(), x.data().end());
  const std::vector<double> yv(y.data().begin(), y.data().end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = xv[i] * xv[i];
    yy[i] = yv[i] * yv[i];
    xy[i] = xv[i] * yv[i];
  }
  const auto mx = filter_valid(xv, h, w, g);
  const auto my = filter_valid(yv, h, w, g);
  const auto exx = filter_valid(xx, h, w, g);
  const auto eyy = filter_valid(yy, h, w, g);
  const auto exy = filter_valid(xy, h, w, g);
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = exx[i] - mx[i] * mx[i];
    const double vy = eyy[i] - my[i] * my[i];
    const double cxy = exy[i] - mx[i] * my[i];
    total += ssim_index(mx[i], my[i], vx, vy, cxy, cfg.c1(), cfg.c2());
  }
  return total / static_cast<double>(mx.size());
}

}  // namespace

double ssim(const Image2D& x, const Image2D& y, const SsimConfig& cfg) {
  require_same_shape(x, y, "ssim");
  if (!(cfg.c1() > 0.0) || !(cfg.c2() > 0.0)) {
    throw ParameterError("SSIM constants C1 and C2 must be positive");
  }
  return cfg.mode == SsimMode::Global ? ssim_global(x, y, cfg) : ssim_windowed(x, y, cfg);
}

double mean_squared_error(const Image2D& x, const Image2D& ref) {
  require_same_shape(x, ref, "mse");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x.data()[i] - ref.data()[i];
    acc += d * d;
  }
  return acc / static_cast<double>(x.size());
}

double psnr(const Image2D& x, const Image2D& ref, double max_value) {
  if (!(max_value > 0.0)) {
    throw ParameterError("psnr: max_value must be positive");
  }
  const double mse = mean_squared_error(x, ref);
  if (mse == 0.0) {
    return kPsnrInfinity;
  }
  return 10.0 * std::log10(max_value * max_value / mse);
}

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw DimensionError("fit_line: xs and ys differ in length");
  }
  if (xs.size() < 2) {
    throw SingularFitError("fit_line: need at least two points");
  }
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) {
    throw SingularFitError("fit_line: all x values are equal");
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) {
    return {};
  }
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  if (!std::isfinite(mean)) {
    return {mean, 0.0};
  }
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / n)};
}

}  // namespace mcforge
