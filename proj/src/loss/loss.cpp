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

#include "mcforge/loss.hpp"

#include <cmath>

namespace mcforge {

LossResult l1_loss(const Image2D& pred, const Image2D& ref) {
  require_same_shape(pred, ref, "l1_loss");
  LossResult out{0.0, Image2D(pred.height(), pred.width(), 0.0)};
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred.data()[i] - ref.data()[i];
    out.value += std::abs(d);
    out.grad.data()[i] = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
  }
  return out;
}

LossResult tv_loss(const Image2D& pred) {
  const std::size_t h = pred.height();
  const std::size_t w = pred.width();
  if (h < 2 || w < 2) {
    throw DimensionError("tv_loss needs at least a 2x2 image");
  }
  LossResult out{0.0, Image2D(h, w, 0.0)};
  auto& g = out.grad;
  for (std::size_t i = 0; i + 1 < h; ++i) {
    for (std::size_t j = 0; j + 1 < w; ++j) {
      const double dv = pred(i + 1, j) - pred(i, j);
      const double dh = pred(i, j + 1) - pred(i, j);
      const double u = dv * dv + dh * dh;
      if (u == 0.0) continue;
      const double q = std::sqrt(std::sqrt(u));  // u^0.25
      out.value += u * q;
      const double s = 2.5 * q;                  // 1.25 u^0.25 * 2
      g(i + 1, j) += s * dv;
      g(i, j + 1) += s * dh;
      g(i, j) -= s * (dv + dh);
    }
  }
  return out;
}

HybridLossResult hybrid_loss(const Image2D& pred, const Image2D& ref, const LossConfig& cfg) {
  if (cfg.alpha < 0.0 || cfg.beta < 0.0) {
    throw ParameterError("loss weights must be non-negative");
  }
  require_same_shape(pred, ref, "hybrid_loss");
  HybridLossResult out{0.0, 0.0, 0.0, Image2D(pred.height(), pred.width(), 0.0)};
  // Both components are always reported; only weighted ones enter the gradient.
  auto grad = out.grad.data();
  const auto l1 = l1_loss(pred, ref);
  const auto tv = tv_loss(pred);
  out.l1 = l1.value;
  out.tv = tv.value;
  if (cfg.alpha != 0.0) {
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += cfg.alpha * l1.grad.data()[i];
  }
  if (cfg.beta != 0.0) {
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += cfg.beta * tv.grad.data()[i];
  }
  out.value = cfg.alpha * out.l1 + cfg.beta * out.tv;
  return out;
}

}  // namespace mcforge
