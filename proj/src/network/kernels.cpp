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

#include "mcforge/network/kernels.hpp"

#include <algorithm>
#include <array>

namespace mcforge::kernels {
namespace {

const double* zero_row(std::size_t width) {
  thread_local std::vector<double> zeros;
  if (zeros.size() < width) zeros.assign(width, 0.0);
  return zeros.data();
}

// dst[x] += sum_r sum_t k[3r + t] * row_r[x + t - 1], zero outside [0, W).
inline void accumulate_3x3(double* __restrict dst, const double* __restrict r0,
                           const double* __restrict r1, const double* __restrict r2,
                           const double* k, std::size_t w) {
  const double k0 = k[0], k1 = k[1], k2 = k[2];
  const double k3 = k[3], k4 = k[4], k5 = k[5];
  const double k6 = k[6], k7 = k[7], k8 = k[8];
  if (w == 1) {
    dst[0] += k1 * r0[0] + k4 * r1[0] + k7 * r2[0];
    return;
  }
  dst[0] += k1 * r0[0] + k2 * r0[1] + k4 * r1[0] + k5 * r1[1] + k7 * r2[0] + k8 * r2[1];
  const std::size_t end = w - 1;
#pragma omp simd
  for (std::size_t x = 1; x < end; ++x) {
    dst[x] += k0 * r0[x - 1] + k1 * r0[x] + k2 * r0[x + 1] + k3 * r1[x - 1] + k4 * r1[x] +
              k5 * r1[x + 1] + k6 * r2[x - 1] + k7 * r2[x] + k8 * r2[x + 1];
  }
  const std::size_t l = w - 1;
  dst[l] += k0 * r0[l - 1] + k1 * r0[l] + k3 * r1[l - 1] + k4 * r1[l] + k6 * r2[l - 1] + k7 * r2[l];
}

// Rows y-1, y, y+1 of a plane, with the zero row standing in past the edges.
inline std::array<const double*, 3> row_window(const double* plane, std::size_t y, std::size_t h,
                                               std::size_t w) {
  const double* z = zero_row(w);
  return {y > 0 ? plane + (y - 1) * w : z, plane + y * w, y + 1 < h ? plane + (y + 1) * w : z};
}

}  // namespace

void conv3x3_forward(const Tensor& in, std::span<const double> weights,
                     std::span<const double> bias, Tensor& out) {
  const std::size_t cin = in.channels;
  const std::size_t cout = bias.size();
  const std::size_t h = in.height;
  const std::size_t w = in.width;
  out = Tensor(cout, h, w);
  const auto n_out = static_cast<std::ptrdiff_t>(cout);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t oc = 0; oc < n_out; ++oc) {
    double* o = out.data.data() + oc * h * w;
    std::fill(o, o + h * w, bias[oc]);
    for (std::size_t ic = 0; ic < cin; ++ic) {
      const double* src = in.data.data() + ic * h * w;
      const double* k = weights.data() + (oc * cin + ic) * 9;
      for (std::size_t y = 0; y < h; ++y) {
        const auto rows = row_window(src, y, h, w);
        accumulate_3x3(o + y * w, rows[0], rows[1], rows[2], k, w);
      }
    }
  }
}

void conv3x3_backward(const Tensor& in, std::span<const double> weights, const Tensor& grad_out,
                      Tensor* grad_in, std::span<double> grad_w, std::span<double> grad_b) {
  const std::size_t cin = in.channels;
  const std::size_t cout = grad_out.channels;
  const std::size_t h = in.height;
  const std::size_t w = in.width;
  const auto n_out = static_cast<std::ptrdiff_t>(cout);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t oc = 0; oc < n_out; ++oc) {
    const double* g = grad_out.data.data() + oc * h * w;
    double b = 0.0;
    for (std::size_t i = 0; i < h * w; ++i) b += g[i];
    grad_b[oc] = b;
    // Per-lane partial sums, one horizontal sum per tap.
    std::vector<double> lanes(9 * w);
    for (std::size_t ic = 0; ic < cin; ++ic) {
      const double* src = in.data.data() + ic * h * w;
      std::fill(lanes.begin(), lanes.end(), 0.0);
      for (std::size_t y = 0; y < h; ++y) {
        const double* grow = g + y * w;
        const auto rows = row_window(src, y, h, w);
        for (int ky = 0; ky < 3; ++ky) {
          const double* __restrict r = rows[ky];
          double* __restrict l0 = lanes.data() + 3 * ky * w;
          double* __restrict l1 = l0 + w;
          double* __restrict l2 = l1 + w;
#pragma omp simd
          for (std::size_t x = 1; x < w; ++x) l0[x] += grow[x] * r[x - 1];
#pragma omp simd
          for (std::size_t x = 0; x < w; ++x) l1[x] += grow[x] * r[x];
#pragma omp simd
          for (std::size_t x = 0; x < w - 1; ++x) l2[x] += grow[x] * r[x + 1];
        }
      }
      double* dst = grad_w.data() + (oc * cin + ic) * 9;
      for (std::size_t t = 0; t < 9; ++t) {
        const double* l = lanes.data() + t * w;
        double sum = 0.0;
        for (std::size_t x = 0; x < w; ++x) sum += l[x];
        dst[t] = sum;
      }
    }
  }

  if (grad_in == nullptr) return;
  *grad_in = Tensor(cin, h, w);
  const auto n_in = static_cast<std::ptrdiff_t>(cin);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ic = 0; ic < n_in; ++ic) {
    double* gi = grad_in->data.data() + ic * h * w;
    for (std::size_t oc = 0; oc < cout; ++oc) {
      const double* g = grad_out.data.data() + oc * h * w;
      const double* k = weights.data() + (oc * cin + ic) * 9;
      // Transposed convolution: correlate with the kernel rotated by 180 degrees.
      const std::array<double, 9> rot{k[8], k[7], k[6], k[5], k[4], k[3], k[2], k[1], k[0]};
      for (std::size_t y = 0; y < h; ++y) {
        const auto rows = row_window(g, y, h, w);
        accumulate_3x3(gi + y * w, rows[0], rows[1], rows[2], rot.data(), w);
      }
    }
  }
}

void relu_inplace(Tensor& t) {
  for (auto& v : t.data) v = v > 0.0 ? v : 0.0;
}

void relu_backward(const Tensor& out, Tensor& grad) {
  for (std::size_t i = 0; i < grad.data.size(); ++i) {
    if (!(out.data[i] > 0.0)) grad.data[i] = 0.0;
  }
}

void maxpool2_forward(const Tensor& in, Tensor& out, std::vector<std::uint32_t>& argmax) {
  const std::size_t oh = in.height / 2;
  const std::size_t ow = in.width / 2;
  out = Tensor(in.channels, oh, ow);
  argmax.assign(out.data.size(), 0);
  const auto n = static_cast<std::ptrdiff_t>(in.channels);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < n; ++c) {
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        std::size_t best = (c * in.height + 2 * y) * in.width + 2 * x;
        for (std::size_t dy = 0; dy < 2; ++dy) {
          for (std::size_t dx = 0; dx < 2; ++dx) {
            const std::size_t idx = (c * in.height + 2 * y + dy) * in.width + 2 * x + dx;
            if (in.data[idx] > in.data[best]) best = idx;
          }
        }
        const std::size_t o = (c * oh + y) * ow + x;
        out.data[o] = in.data[best];
        argmax[o] = static_cast<std::uint32_t>(best);
      }
    }
  }
}

void maxpool2_backward(const Tensor& grad_out, const std::vector<std::uint32_t>& argmax,
                       Tensor& grad_in) {
  std::fill(grad_in.data.begin(), grad_in.data.end(), 0.0);
  for (std::size_t i = 0; i < grad_out.data.size(); ++i) {
    grad_in.data[argmax[i]] += grad_out.data[i];
  }
}

void upsample2_forward(const Tensor& in, Tensor& out) {
  out = Tensor(in.channels, in.height * 2, in.width * 2);
  const auto n = static_cast<std::ptrdiff_t>(in.channels);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < n; ++c) {
    for (std::size_t y = 0; y < out.height; ++y) {
      for (std::size_t x = 0; x < out.width; ++x) {
        out.at(c, y, x) = in.at(c, y / 2, x / 2);
      }
    }
  }
}

void upsample2_backward(const Tensor& grad_out, Tensor& grad_in) {
  grad_in = Tensor(grad_out.channels, grad_out.height / 2, grad_out.width / 2);
  const auto n = static_cast<std::ptrdiff_t>(grad_out.channels);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < n; ++c) {
    for (std::size_t y = 0; y < grad_in.height; ++y) {
      for (std::size_t x = 0; x < grad_in.width; ++x) {
        grad_in.at(c, y, x) = grad_out.at(c, 2 * y, 2 * x) + grad_out.at(c, 2 * y, 2 * x + 1) +
                              grad_out.at(c, 2 * y + 1, 2 * x) +
                              grad_out.at(c, 2 * y + 1, 2 * x + 1);
      }
    }
  }
}

}  // namespace mcforge::kernels
