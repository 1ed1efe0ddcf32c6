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

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "mcforge/core/image.hpp"

namespace mcforge {

/// k-space location in cycles/pixel; valid range is [-0.5, 0.5) on each axis.
struct SamplePoint {
  double kx = 0.0;
  double ky = 0.0;
};

enum class Engine { Gridding, Direct };

Engine parse_engine(std::string_view name);

struct CorruptionOptions {
  Engine engine = Engine::Gridding;
  double oversampling = 2.0;  // sigma, >= 1.25
  int half_width = 3;         // kernel half-width in oversampled grid cells, >= 2
};

void validate(const CorruptionOptions& opt);
bool in_band(const SamplePoint& p) noexcept;

// Evaluates the continuous spectrum
//   S(k) = 1/sqrt(HW) * sum_x f(x) exp(-i 2pi k . (x - center))
// of a fixed image at arbitrary points. Construction does the per-image work;
// evaluate() is const and safe to call from several threads.
class SpectrumEvaluator {
 public:
  virtual ~SpectrumEvaluator() = default;
  virtual Complex evaluate(const SamplePoint& p) const = 0;
  void evaluate(std::span<const SamplePoint> points, std::span<Complex> out) const;
};

/// Exact separable summation, O(HW) per point.
class DirectSpectrum final : public SpectrumEvaluator {
 public:
  explicit DirectSpectrum(const ComplexGrid& img);
  Complex evaluate(const SamplePoint& p) const override;
  using SpectrumEvaluator::evaluate;

 private:
  std::size_t height_, width_;
  std::vector<double> re_, im_;
  double scale_;
};

/// Kaiser-Bessel gridding on a sigma-oversampled grid (NuFFT type 2).
class GriddingSpectrum final : public SpectrumEvaluator {
 public:
  GriddingSpectrum(const ComplexGrid& img, double oversampling, int half_width);
  Complex evaluate(const SamplePoint& p) const override;
  using SpectrumEvaluator::evaluate;

  double beta() const noexcept { return beta_; }
  std::size_t grid_height() const noexcept { return grid_h_; }
  std::size_t grid_width() const noexcept { return grid_w_; }

 private:
  double kernel(double u) const;

  std::size_t grid_h_, grid_w_;
  int half_width_;
  double beta_;
  std::vector<Complex> grid_;
};

std::unique_ptr<SpectrumEvaluator> make_spectrum(const ComplexGrid& img,
                                                 const CorruptionOptions& opt);

/// Spectrum samples at arbitrary in-band points via the configured engine.
std::vector<Complex> nufft_eval(const ComplexGrid& img, std::span<const SamplePoint> points,
                                const CorruptionOptions& opt = {});
std::vector<Complex> nufft_eval(const Image2D& img, std::span<const SamplePoint> points,
                                const CorruptionOptions& opt = {});

/// Brute-force O(HW * M) reference summation, one complex exponential per term.
std::vector<Complex> dft_eval_oracle(const ComplexGrid& img, std::span<const SamplePoint> points);
std::vector<Complex> dft_eval_oracle(const Image2D& img, std::span<const SamplePoint> points);

/// Standard Beatty et al. shape parameter for a kernel of full width 2w at
/// oversampling sigma.
double kaiser_bessel_beta(double oversampling, int half_width);

}  // namespace mcforge
