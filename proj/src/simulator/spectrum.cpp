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

#include "mcforge/simulator/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mcforge/core/fft.hpp"

namespace mcforge {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_points(std::span<const SamplePoint> points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!in_band(points[i])) {
      throw DomainError("sample point " + std::to_string(i) + " (" +
                        std::to_string(points[i].kx) + ", " + std::to_string(points[i].ky) +
                        ") outside [-0.5, 0.5)^2");
    }
  }
}

std::size_t oversampled_size(std::size_t n, double sigma) {
  auto g = static_cast<std::size_t>(std::ceil(sigma * static_cast<double>(n)));
  g += g % 2;
  return std::max(g, n + n % 2);
}

// Fourier transform of the truncated Kaiser-Bessel kernel I0(beta sqrt(1-(u/w)^2)),
// |u| <= w, evaluated at xi cycles per grid cell.
double kaiser_bessel_ft(double xi, double beta, int w) {
  const double a = kTwoPi * w * xi;
  const double d = beta * beta - a * a;
  if (d > 1e-12) {
    const double z = std::sqrt(d);
    return 2.0 * w * std::sinh(z) / z;
  }
  if (d < -1e-12) {
    const double z = std::sqrt(-d);
    return 2.0 * w * std::sin(z) / z;
  }
  return 2.0 * w;
}

}  // namespace

Engine parse_engine(std::string_view name) {
  if (name == "gridding") return Engine::Gridding;
  if (name == "direct") return Engine::Direct;
  throw ParameterError("unknown engine '" + std::string(name) + "'");
}

void validate(const CorruptionOptions& opt) {
  if (!(opt.oversampling >= 1.25)) {
    throw ParameterError("oversampling factor must be >= 1.25");
  }
  if (opt.half_width < 2) {
    throw ParameterError("kernel half-width must be >= 2");
  }
}

bool in_band(const SamplePoint& p) noexcept {
  return p.kx >= -0.5 && p.kx < 0.5 && p.ky >= -0.5 && p.ky < 0.5;
}

double kaiser_bessel_beta(double oversampling, int half_width) {
  const double width = 2.0 * half_width;
  const double r = width / oversampling * (oversampling - 0.5);
  return std::numbers::pi * std::sqrt(r * r - 0.8);
}

void SpectrumEvaluator::evaluate(std::span<const SamplePoint> points,
                                 std::span<Complex> out) const {
  if (points.size() != out.size()) {
    throw DimensionError("evaluate: output span size mismatch");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[i] = evaluate(points[i]);
  }
}

DirectSpectrum::DirectSpectrum(const ComplexGrid& img)
    : height_(img.height()),
      width_(img.width()),
      re_(img.size()),
      im_(img.size()),
      scale_(1.0 / std::sqrt(static_cast<double>(img.size()))) {
  for (std::size_t i = 0; i < img.size(); ++i) {
    re_[i] = img.data()[i].real();
    im_[i] = img.data()[i].imag();
  }
}

Complex DirectSpectrum::evaluate(const SamplePoint& p) const {
  const auto cy = static_cast<double>(height_ / 2);
  const auto cx = static_cast<double>(width_ / 2);
  // exp(-i 2pi k.(x-c)) factors into a row phase and a column phase.
  thread_local std::vector<double> cx_cos, cx_sin;
  cx_cos.resize(width_);
  cx_sin.resize(width_);
  for (std::size_t x = 0; x < width_; ++x) {
    const double a = -kTwoPi * p.kx * (static_cast<double>(x) - cx);
    cx_cos[x] = std::cos(a);
    cx_sin[x] = std::sin(a);
  }
  double acc_re = 0.0;
  double acc_im = 0.0;
  for (std::size_t y = 0; y < height_; ++y) {
    const double* r = re_.data() + y * width_;
    const double* i = im_.data() + y * width_;
    double row_re = 0.0;
    double row_im = 0.0;
#pragma omp simd reduction(+ : row_re, row_im)
    for (std::size_t x = 0; x < width_; ++x) {
      row_re += r[x] * cx_cos[x] - i[x] * cx_sin[x];
      row_im += r[x] * cx_sin[x] + i[x] * cx_cos[x];
    }
    const double a = -kTwoPi * p.ky * (static_cast<double>(y) - cy);
    const double c = std::cos(a);
    const double s = std::sin(a);
    acc_re += row_re * c - row_im * s;
    acc_im += row_re * s + row_im * c;
  }
  return {acc_re * scale_, acc_im * scale_};
}

GriddingSpectrum::GriddingSpectrum(const ComplexGrid& img, double oversampling, int half_width)
    : grid_h_(oversampled_size(img.height(), oversampling)),
      grid_w_(oversampled_size(img.width(), oversampling)),
      half_width_(half_width),
      beta_(kaiser_bessel_beta(oversampling, half_width)),
      grid_(grid_h_ * grid_w_) {
  validate(CorruptionOptions{Engine::Gridding, oversampling, half_width});
  const std::size_t h = img.height();
  const std::size_t w = img.width();
  const auto cy = static_cast<std::ptrdiff_t>(h / 2);
  const auto cx = static_cast<std::ptrdiff_t>(w / 2);
  const auto gh = static_cast<std::ptrdiff_t>(grid_h_);
  const auto gw = static_cast<std::ptrdiff_t>(grid_w_);

  std::vector<double> apod_x(w), apod_y(h);
  for (std::size_t x = 0; x < w; ++x) {
    const double n = static_cast<double>(static_cast<std::ptrdiff_t>(x) - cx);
    apod_x[x] = kaiser_bessel_ft(n / static_cast<double>(grid_w_), beta_, half_width_);
  }
  for (std::size_t y = 0; y < h; ++y) {
    const double n = static_cast<double>(static_cast<std::ptrdiff_t>(y) - cy);
    apod_y[y] = kaiser_bessel_ft(n / static_cast<double>(grid_h_), beta_, half_width_);
  }

  // Deapodize, then place pixel offset n at index n mod G of the padded grid.
  for (std::size_t y = 0; y < h; ++y) {
    const auto gy = (static_cast<std::ptrdiff_t>(y) - cy + gh) % gh;
    for (std::size_t x = 0; x < w; ++x) {
      const auto gx = (static_cast<std::ptrdiff_t>(x) - cx + gw) % gw;
      grid_[gy * gw + gx] = img(y, x) / (apod_y[y] * apod_x[x]);
    }
  }
  dft2_inplace(grid_, grid_h_, grid_w_, false);
  const double scale = 1.0 / std::sqrt(static_cast<double>(h * w));
  for (auto& v : grid_) {
    v *= scale;
  }
}

double GriddingSpectrum::kernel(double u) const {
  const double t = u / half_width_;
  const double r = 1.0 - t * t;
  if (r < 0.0) {
    return 0.0;
  }
  // The truncated kernel jumps at |u| = w; the lattice sum sees the midpoint.
  if (r == 0.0) {
    return 0.5;
  }
  return std::cyl_bessel_i(0.0, beta_ * std::sqrt(r));
}

Complex GriddingSpectrum::evaluate(const SamplePoint& p) const {
  const double uy = p.ky * static_cast<double>(grid_h_);
  const double ux = p.kx * static_cast<double>(grid_w_);
  const auto gh = static_cast<std::ptrdiff_t>(grid_h_);
  const auto gw = static_cast<std::ptrdiff_t>(grid_w_);
  const auto y0 = static_cast<std::ptrdiff_t>(std::ceil(uy - half_width_));
  const auto x0 = static_cast<std::ptrdiff_t>(std::ceil(ux - half_width_));
  const int taps = 2 * half_width_ + 1;

  thread_local std::vector<double> wx, wy;
  wx.resize(taps);
  wy.resize(taps);
  for (int t = 0; t < taps; ++t) {
    wx[t] = kernel(ux - static_cast<double>(x0 + t));
    wy[t] = kernel(uy - static_cast<double>(y0 + t));
  }

  Complex acc{};
  for (int ty = 0; ty < taps; ++ty) {
    if (wy[ty] == 0.0) continue;
    const auto row = ((y0 + ty) % gh + gh) % gh;
    Complex row_acc{};
    for (int tx = 0; tx < taps; ++tx) {
      if (wx[tx] == 0.0) continue;
      const auto col = ((x0 + tx) % gw + gw) % gw;
      row_acc += grid_[row * gw + col] * wx[tx];
    }
    acc += row_acc * wy[ty];
  }
  return acc;
}

std::unique_ptr<SpectrumEvaluator> make_spectrum(const ComplexGrid& img,
                                                 const CorruptionOptions& opt) {
  validate(opt);
  if (opt.engine == Engine::Direct) {
    return std::make_unique<DirectSpectrum>(img);
  }
  return std::make_unique<GriddingSpectrum>(img, opt.oversampling, opt.half_width);
}

std::vector<Complex> nufft_eval(const ComplexGrid& img, std::span<const SamplePoint> points,
                                const CorruptionOptions& opt) {
  check_points(points);
  const auto spectrum = make_spectrum(img, opt);
  std::vector<Complex> out(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = spectrum->evaluate(points[i]);
  }
  return out;
}

std::vector<Complex> nufft_eval(const Image2D& img, std::span<const SamplePoint> points,
                                const CorruptionOptions& opt) {
  return nufft_eval(to_complex(img), points, opt);
}

std::vector<Complex> dft_eval_oracle(const ComplexGrid& img, std::span<const SamplePoint> points) {
  check_points(points);
  const auto cy = static_cast<double>(img.height() / 2);
  const auto cx = static_cast<double>(img.width() / 2);
  const double scale = 1.0 / std::sqrt(static_cast<double>(img.size()));
  std::vector<Complex> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    Complex acc{};
    for (std::size_t y = 0; y < img.height(); ++y) {
      for (std::size_t x = 0; x < img.width(); ++x) {
        const double phase = -kTwoPi * (points[i].kx * (static_cast<double>(x) - cx) +
                                        points[i].ky * (static_cast<double>(y) - cy));
        acc += img(y, x) * std::polar(1.0, phase);
      }
    }
    out[i] = acc * scale;
  }
  return out;
}

std::vector<Complex> dft_eval_oracle(const Image2D& img, std::span<const SamplePoint> points) {
  return dft_eval_oracle(to_complex(img), points);
}

}  // namespace mcforge
