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

/// Weights of the hybrid objective alpha * L1 + beta * TV.
struct LossConfig {
  double alpha = 1.0;
  double beta = 0.0;

  static constexpr LossConfig stage1() { return {1.0, 0.0}; }
  static constexpr LossConfig stage2() { return {1.0, 1.0}; }
};

struct LossResult {
  double value = 0.0;
  Image2D grad;
};

struct HybridLossResult {
  double value = 0.0;
  double l1 = 0.0;
  double tv = 0.0;
  Image2D grad;
};

/// Summed absolute error; gradient sign(pred - ref) with sign(0) = 0.
LossResult l1_loss(const Image2D& pred, const Image2D& ref);

/// Sum over i < H-1, j < W-1 of u^1.25, u = (I(i+1,j)-I(i,j))^2 + (I(i,j+1)-I(i,j))^2.
/// The derivative 1.25 u^0.25 du vanishes at u = 0.
LossResult tv_loss(const Image2D& pred);

HybridLossResult hybrid_loss(const Image2D& pred, const Image2D& ref, const LossConfig& cfg);

}  // namespace mcforge
