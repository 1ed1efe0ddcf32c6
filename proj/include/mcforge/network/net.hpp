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
#include <string_view>
#include <vector>

#include "mcforge/core/image.hpp"
#include "mcforge/loss.hpp"
#include "mcforge/network/tensor.hpp"

namespace mcforge {

enum class Variant { U, UPlusO };

Variant parse_variant(std::string_view name);
std::string_view variant_name(Variant v);

/// Encoder-decoder geometry. Level l has base_channels * 2^l channels; the
/// bottleneck has base_channels * 2^depth. Each level is two 3x3 conv + ReLU
/// blocks; down-sampling is 2x2 max-pool; up-sampling is nearest-neighbour x2
/// followed by a 3x3 conv + ReLU, then concatenation with the encoder skip.
/// The last 3x3 convolution is linear. UPlusO also concatenates the raw input
/// in front of that last convolution.
struct NetSpec {
  int depth = 3;
  int base_channels = 8;
  Variant variant = Variant::U;

  friend bool operator==(const NetSpec&, const NetSpec&) = default;
};

void validate(const NetSpec& spec);

struct ConvShape {
  std::size_t in_channels;
  std::size_t out_channels;
  std::size_t weight_offset;  // into the flat parameter vector
  std::size_t bias_offset;

  std::size_t weight_count() const noexcept { return out_channels * in_channels * 9; }
};

/// Convolution layers in declaration order: encoder (2 per level), bottleneck
/// (2), decoder (up-conv + 2 per level, deepest first), final.
std::vector<ConvShape> conv_layout(const NetSpec& spec);
std::size_t parameter_count(const NetSpec& spec);

/// All weights and biases in one flat vector laid out by conv_layout().
struct NetParams {
  NetSpec spec;
  std::vector<ConvShape> layers;
  std::vector<double> values;

  NetParams() = default;
  explicit NetParams(const NetSpec& s);  // zero-initialized

  std::span<double> weights(std::size_t layer);
  std::span<const double> weights(std::size_t layer) const;
  std::span<double> bias(std::size_t layer);
  std::span<const double> bias(std::size_t layer) const;

  friend bool operator==(const NetParams& a, const NetParams& b) {
    return a.spec == b.spec && a.values == b.values;
  }
};

/// Uniform fan-in scaled (He) weights, zero biases. Layer i draws from its
/// own stream derived from (seed, i), so U and U+O share every layer but the
/// last for equal seeds.
NetParams init_params(const NetSpec& spec, std::uint64_t seed);

Image2D forward(const NetParams& params, const Image2D& img);

struct BackwardResult {
  HybridLossResult loss;
  std::vector<double> grads;  // same layout as NetParams::values
  Image2D prediction;
};

/// Reverse-mode gradient of hybrid_loss(forward(params, img), ref).
BackwardResult backward(const NetParams& params, const Image2D& img, const Image2D& ref,
                        const LossConfig& cfg);

struct PredictResult {
  std::vector<Image2D> outputs;
  double seconds_per_image = 0.0;
};

PredictResult predict_batch(const NetParams& params, std::span<const Image2D> images);

}  // namespace mcforge
