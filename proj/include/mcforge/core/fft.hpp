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

#include "mcforge/core/image.hpp"

namespace mcforge {

// Centered, unitary 2D DFT. The DC sample sits at (H/2, W/2) (integer
// division) and pixel coordinates are measured from the same center:
//
//   X(u, v) = 1/sqrt(HW) * sum_{y,x} f(y, x) exp(-i 2pi ((u-cu)(y-cy)/H + (v-cv)(x-cx)/W))
//
// ifft2 is the exact inverse, so ifft2(fft2(x)) == x up to rounding and
// Parseval holds with no extra factors.
ComplexGrid fft2(const ComplexGrid& img);
ComplexGrid fft2(const Image2D& img);
ComplexGrid ifft2(const ComplexGrid& kspace);

}  // namespace mcforge

namespace mcforge {

/// Raw in-place 2D DFT in natural (uncentered) order with no scaling.
/// Forward uses exp(-i...), inverse exp(+i...).
void dft2_inplace(std::span<Complex> data, std::size_t height, std::size_t width, bool inverse);

}  // namespace mcforge
