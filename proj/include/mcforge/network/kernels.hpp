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
#include <span>
#include <vector>

#include "mcforge/network/tensor.hpp"

// Layer kernels of the encoder-decoder. Weights of a 3x3 convolution are laid
// out [out_channel][in_channel][ky][kx]; every convolution uses zero "same"
// padding. The `kernels` namespace holds the OpenMP versions (parallel over
// channels, each output element owned by one thread, so results do not depend
// on the thread count); `reference` holds plain loops used by the tests and
// the benchmark.
namespace mcforge::kernels {

void conv3x3_forward(const Tensor& in, std::span<const double> weights,
                     std::span<const double> bias, Tensor& out);

/// Overwrites grad_w and grad_b; grad_in is skipped when null.
void conv3x3_backward(const Tensor& in, std::span<const double> weights, const Tensor& grad_out,
                      Tensor* grad_in, std::span<double> grad_w, std::span<double> grad_b);

void relu_inplace(Tensor& t);
/// Zeroes grad where the forward output was not positive.
void relu_backward(const Tensor& out, Tensor& grad);

void maxpool2_forward(const Tensor& in, Tensor& out, std::vector<std::uint32_t>& argmax);
void maxpool2_backward(const Tensor& grad_out, const std::vector<std::uint32_t>& argmax,
                       Tensor& grad_in);

void upsample2_forward(const Tensor& in, Tensor& out);
void upsample2_backward(const Tensor& grad_out, Tensor& grad_in);

}  // namespace mcforge::kernels

namespace mcforge::reference {

void conv3x3_forward(const Tensor& in, std::span<const double> weights,
                     std::span<const double> bias, Tensor& out);
void conv3x3_backward(const Tensor& in, std::span<const double> weights, const Tensor& grad_out,
                      Tensor* grad_in, std::span<double> grad_w, std::span<double> grad_b);
void maxpool2_forward(const Tensor& in, Tensor& out, std::vector<std::uint32_t>& argmax);
void upsample2_forward(const Tensor& in, Tensor& out);

}  // namespace mcforge::reference
