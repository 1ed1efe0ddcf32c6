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

namespace mcforge::reference {
namespace {

double padded(const Tensor& t, std::size_t c, long y, long x) {
  if (y < 0 || x < 0 || y >= static_cast<long>(t.height) || x >= static_cast<long>(t.width)) {
    return 0.0;
  }
  return t.at(c, y, x);
}

}  // namespace

void conv3x3_forward(const Tensor& in, std::span<const double> weights,
                     std::span<const double> bias, Tensor& out) {
  const std::size_t cin = in.channels;
  out = Tensor(bias.size(), in.height, in.width);
  for (std::size_t oc = 0; oc < out.channels; ++oc) {
    for (std::size_t y = 0; y < in.height; ++y) {
      for (std::size_t x = 0; x < in.width; ++x) {
        double acc = bias[oc];
        for (std::size_t ic = 0; ic < cin; ++ic) {
          for (long ky = 0; ky < 3; ++ky) {
            for (long kx = 0; kx < 3; ++kx) {
              acc += weights[((oc * cin + ic) * 3 + ky) * 3 + kx] *
                     padded(in, ic, static_cast<long>(y) + ky - 1, static_cast<long>(x) + kx - 1);
            }
          }
        }
        out.at(oc, y, x) = acc;
      }
    }
  }
}

void conv3x3_backward(const Tensor& in, std::span<const double> weights, const Tensor& grad_out,
                      Tensor* grad_in, std::span<double> grad_w, std::span<double> grad_b) {
  const std::size_t cin = in.channels;
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  std::fill(grad_b.begin(), grad_b.end(), 0.0);
  if (grad_in != nullptr) *grad_in = Tensor(cin, in.height, in.width);
  for (std::size_t oc = 0; oc < grad_out.channels; ++oc) {
    for (std::size_t y = 0; y < in.height; ++y) {
      for (std::size_t x = 0; x < in.width; ++x) {
        const double g = grad_out.at(oc, y, x);
        grad_b[oc] += g;
        for (std::size_t ic = 0; ic < cin; ++ic) {
          for (long ky = 0; ky < 3; ++ky) {
            for (long kx = 0; kx < 3; ++kx) {
              const long iy = static_cast<long>(y) + ky - 1;
              const long ix = static_cast<long>(x) + kx - 1;
              if (iy < 0 || ix < 0 || iy >= static_cast<long>(in.height) ||
                  ix >= static_cast<long>(in.width)) {
                continue;
              }
              const std::size_t wi = ((oc * cin + ic) * 3 + ky) * 3 + kx;
              grad_w[wi] += g * in.at(ic, iy, ix);
              if (grad_in != nullptr) grad_in->at(ic, iy, ix) += g * weights[wi];
            }
          }
        }
      }
    }
  }
}

void maxpool2_forward(const Tensor& in, Tensor& out, std::vector<std::uint32_t>& argmax) {
  out = Tensor(in.channels, in.height / 2, in.width / 2);
  argmax.assign(out.data.size(), 0);
  for (std::size_t c = 0; c < out.channels; ++c) {
    for (std::size_t y = 0; y < out.height; ++y) {
      for (std::size_t x = 0; x < out.width; ++x) {
        std::size_t best = (c * in.height + 2 * y) * in.width + 2 * x;
        for (std::size_t d = 1; d < 4; ++d) {
          const std::size_t idx = (c * in.height + 2 * y + d / 2) * in.width + 2 * x + d % 2;
          if (in.data[idx] > in.data[best]) best = idx;
        }
        out.at(c, y, x) = in.data[best];
        argmax[(c * out.height + y) * out.width + x] = static_cast<std::uint32_t>(best);
      }
    }
  }
}

void upsample2_forward(const Tensor& in, Tensor& out) {
  out = Tensor(in.channels, in.height * 2, in.width * 2);
  for (std::size_t c = 0; c < in.channels; ++c) {
    for (std::size_t y = 0; y < out.height; ++y) {
      for (std::size_t x = 0; x < out.width; ++x) {
        out.at(c, y, x) = in.at(c, y / 2, x / 2);
      }
    }
  }
}

}  // namespace mcforge::reference
