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

#include "mcforge/core/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace mcforge {
namespace {

// FFTW planning is not thread-safe; execution on a private plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftwBuffer {
 public:
  explicit FftwBuffer(std::size_t n)
      : ptr_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (ptr_ == nullptr) {
      throw std::bad_alloc();
    }
  }
  ~FftwBuffer() { fftw_free(ptr_); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;

  fftw_complex* get() const noexcept { return ptr_; }

 private:
  fftw_complex* ptr_;
};

ComplexGrid centered_transform(const ComplexGrid& in, int sign) {
  const std::size_t h = in.height();
  const std::size_t w = in.width();
  const std::size_t cy = h / 2;
  const std::size_t cx = w / 2;
  FftwBuffer buf(h * w);

  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(static_cast<int>(h), static_cast<int>(w), buf.get(), buf.get(), sign,
                            FFTW_ESTIMATE);
  }

  // Element a of the FFTW input holds the sample at centered offset a (mod N).
  for (std::size_t a = 0; a < h; ++a) {
    const std::size_t y = (a + cy) % h;
    for (std::size_t b = 0; b < w; ++b) {
      const std::size_t x = (b + cx) % w;
      const Complex v = in(y, x);
      buf.get()[a * w + b][0] = v.real();
      buf.get()[a * w + b][1] = v.imag();
    }
  }

  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(h * w));
  ComplexGrid out(h, w);
  for (std::size_t u = 0; u < h; ++u) {
    const std::size_t a = (u + h - cy) % h;
    for (std::size_t v = 0; v < w; ++v) {
      const std::size_t b = (v + w - cx) % w;
      out(u, v) = Complex(buf.get()[a * w + b][0], buf.get()[a * w + b][1]) * scale;
    }
  }
  return out;
}

}  // namespace

void dft2_inplace(std::span<Complex> data, std::size_t height, std::size_t width, bool inverse) {
  if (data.size() != height * width || data.empty()) {
    throw DimensionError("dft2_inplace: buffer does not match dimensions");
  }
  // std::complex<double> is layout-compatible with fftw_complex.
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  const int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    // FFTW_ESTIMATE does not touch the buffer during planning.
    plan = fftw_plan_dft_2d(static_cast<int>(height), static_cast<int>(width), ptr, ptr, sign,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

ComplexGrid fft2(const ComplexGrid& img) { return centered_transform(img, FFTW_FORWARD); }

ComplexGrid fft2(const Image2D& img) { return fft2(to_complex(img)); }

ComplexGrid ifft2(const ComplexGrid& kspace) { return centered_transform(kspace, FFTW_BACKWARD); }

}  // namespace mcforge
