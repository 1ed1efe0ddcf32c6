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
#include "mcforge/simulator/spectrum.hpp"
#include "mcforge/trajectory.hpp"

namespace mcforge {

// Rigid in-plane motion corruption. Row j of the centered k-space grid is
// acquired while the object sits at states[j]; its samples read the object
// spectrum at R(-theta) k and pick up the translation ramp exp(-i 2pi k.t).
// Rotated locations that leave the sampled band [-0.5, 0.5)^2 read zero.

/// Corrupted centered k-space. Lines are evaluated in parallel; each line
/// writes a disjoint row, so the result does not depend on thread count.
ComplexGrid corrupt_kspace(const ComplexGrid& img, const MotionTrajectory& m,
                           const CorruptionOptions& opt = {});

/// Single-threaded version built on dft_eval_oracle; kept as a test reference.
ComplexGrid corrupt_kspace_reference(const ComplexGrid& img, const MotionTrajectory& m);

/// Complex image after the inverse transform (before taking magnitude).
ComplexGrid corrupt_complex(const Image2D& img, const MotionTrajectory& m,
                            const CorruptionOptions& opt = {});

/// Magnitude image, the usual output.
Image2D corrupt(const Image2D& img, const MotionTrajectory& m, const CorruptionOptions& opt = {});

/// Nominal and motion-displaced sample location for line `row`, column `col`.
SamplePoint nominal_point(std::size_t row, std::size_t col, std::size_t height, std::size_t width);
SamplePoint rotate_point(const SamplePoint& k, double theta_deg);

/// Image-space rotation about the pixel center (H/2, W/2) using the same axis
/// and sign convention as the k-space model, with bilinear interpolation and
/// zero fill outside the field of view.
Image2D rotate_bilinear(const Image2D& img, double theta_deg);

/// Circular shift: out(y, x) = in(y - ty, x - tx).
Image2D circular_shift(const Image2D& img, long tx, long ty);

}  // namespace mcforge
