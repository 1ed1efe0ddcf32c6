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

#include "mcforge/network/net.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include "mcforge/core/seed.hpp"
#include "mcforge/network/kernels.hpp"

namespace mcforge {
namespace {

std::size_t channels_at(const NetSpec& spec, int level) {
  return static_cast<std::size_t>(spec.base_channels) << level;
}

std::size_t encoder_layer(int level, int which) { return 2 * level + which; }
std::size_t bottleneck_layer(const NetSpec& s, int which) { return 2 * s.depth + which; }
// Decoder levels run deepest-first; `which` is 0 up-conv, 1 and 2 the block.
std::size_t decoder_layer(const NetSpec& s, int level, int which) {
  return 2 * s.depth + 2 + 3 * (s.depth - 1 - level) + which;
}
std::size_t final_layer(const NetSpec& s) { return 5 * s.depth + 2; }

Tensor concat(const Tensor& a, const Tensor& b) {
  Tensor out(a.channels + b.channels, a.height, a.width);
  std::copy(a.data.begin(), a.data.end(), out.data.begin());
  std::copy(b.data.begin(), b.data.end(), out.data.begin() + a.data.size());
  return out;
}

// Splits a concatenated gradient back into its two channel groups.
void split(const Tensor& g, std::size_t first_channels, Tensor& a, Tensor& b) {
  a = Tensor(first_channels, g.height, g.width);
  b = Tensor(g.channels - first_channels, g.height, g.width);
  std::copy(g.data.begin(), g.data.begin() + a.data.size(), a.data.begin());
  std::copy(g.data.begin() + a.data.size(), g.data.end(), b.data.begin());
}

void add_into(Tensor& dst, const Tensor& src) {
  for (std::size_t i = 0; i < dst.data.size(); ++i) dst.data[i] += src.data[i];
}

struct Level {
  Tensor a, b;  // post-ReLU block outputs; b is the skip
  Tensor pooled;
  std::vector<std::uint32_t> argmax;
};

struct DecoderLevel {
  Tensor up, upconv, cat, a, b;
};

struct Tape {
  Tensor input;
  std::vector<Level> enc;
  Tensor bott_a, bott_b;
  std::vector<DecoderLevel> dec;  // indexed by level
  Tensor final_in;
  Tensor output;
};

void check_input(const NetSpec& spec, const Image2D& img) {
  const std::size_t m = std::size_t{1} << spec.depth;
  if (img.height() % m != 0 || img.width() % m != 0) {
    throw DimensionError("input " + std::to_string(img.height()) + "x" +
                         std::to_string(img.width()) + " not divisible by 2^depth = " +
                         std::to_string(m));
  }
}

void conv_relu(const NetParams& p, std::size_t layer, const Tensor& in, Tensor& out) {
  kernels::conv3x3_forward(in, p.weights(layer), p.bias(layer), out);
  kernels::relu_inplace(out);
}

Tape run_forward(const NetParams& p, const Image2D& img) {
  const NetSpec& s = p.spec;
  check_input(s, img);
  Tape t;
  t.input = Tensor(1, img.height(), img.width());
  std::copy(img.data().begin(), img.data().end(), t.input.data.begin());
  t.enc.resize(s.depth);
  t.dec.resize(s.depth);

  const Tensor* x = &t.input;
  for (int l = 0; l < s.depth; ++l) {
    auto& lv = t.enc[l];
    conv_relu(p, encoder_layer(l, 0), *x, lv.a);
    conv_relu(p, encoder_layer(l, 1), lv.a, lv.b);
    kernels::maxpool2_forward(lv.b, lv.pooled, lv.argmax);
    x = &lv.pooled;
  }
  conv_relu(p, bottleneck_layer(s, 0), *x, t.bott_a);
  conv_relu(p, bottleneck_layer(s, 1), t.bott_a, t.bott_b);
  x = &t.bott_b;
  for (int l = s.depth - 1; l >= 0; --l) {
    auto& d = t.dec[l];
    kernels::upsample2_forward(*x, d.up);
    conv_relu(p, decoder_layer(s, l, 0), d.up, d.upconv);
    d.cat = concat(t.enc[l].b, d.upconv);
    conv_relu(p, decoder_layer(s, l, 1), d.cat, d.a);
    conv_relu(p, decoder_layer(s, l, 2), d.a, d.b);
    x = &d.b;
  }
  t.final_in = s.variant == Variant::UPlusO ? concat(*x, t.input) : *x;
  kernels::conv3x3_forward(t.final_in, p.weights(final_layer(s)), p.bias(final_layer(s)),
                           t.output);
  return t;
}

// Backprop through conv + ReLU; `grad` holds dL/d(post-ReLU output) and is consumed.
Tensor conv_relu_backward(const NetParams& p, std::size_t layer, const Tensor& in,
                          const Tensor& out, Tensor& grad, std::vector<double>& grads,
                          bool need_input_grad = true) {
  kernels::relu_backward(out, grad);
  Tensor grad_in;
  const auto& shape = p.layers[layer];
  kernels::conv3x3_backward(
      in, p.weights(layer), grad, need_input_grad ? &grad_in : nullptr,
      std::span<double>(grads.data() + shape.weight_offset, shape.weight_count()),
      std::span<double>(grads.data() + shape.bias_offset, shape.out_channels));
  return grad_in;
}

}  // namespace

Variant parse_variant(std::string_view name) {
  if (name == "u" || name == "U") return Variant::U;
  if (name == "u+o" || name == "U+O") return Variant::UPlusO;
  throw ParameterError("unknown variant '" + std::string(name) + "' (expected u or u+o)");
}

std::string_view variant_name(Variant v) { return v == Variant::U ? "u" : "u+o"; }

void validate(const NetSpec& spec) {
  if (spec.depth < 1 || spec.depth > 8) {
    throw ParameterError("network depth must be in [1, 8]");
  }
  if (spec.base_channels < 1 || spec.base_channels > 1024) {
    throw ParameterError("base channel count must be in [1, 1024]");
  }
}

std::vector<ConvShape> conv_layout(const NetSpec& spec) {
  validate(spec);
  std::vector<ConvShape> layers;
  std::size_t offset = 0;
  auto add = [&](std::size_t in, std::size_t out) {
    layers.push_back({in, out, offset, offset + out * in * 9});
    offset += out * in * 9 + out;
  };
  std::size_t prev = 1;
  for (int l = 0; l < spec.depth; ++l) {
    add(prev, channels_at(spec, l));
    add(channels_at(spec, l), channels_at(spec, l));
    prev = channels_at(spec, l);
  }
  add(prev, channels_at(spec, spec.depth));
  add(channels_at(spec, spec.depth), channels_at(spec, spec.depth));
  prev = channels_at(spec, spec.depth);
  for (int l = spec.depth - 1; l >= 0; --l) {
    add(prev, channels_at(spec, l));
    add(2 * channels_at(spec, l), channels_at(spec, l));
    add(channels_at(spec, l), channels_at(spec, l));
    prev = channels_at(spec, l);
  }
  add(prev + (spec.variant == Variant::UPlusO ? 1 : 0), 1);
  return layers;
}

std::size_t parameter_count(const NetSpec& spec) {
  const auto layers = conv_layout(spec);
  return layers.back().bias_offset + layers.back().out_channels;
}

NetParams::NetParams(const NetSpec& s)
    : spec(s), layers(conv_layout(s)), values(parameter_count(s), 0.0) {}

std::span<double> NetParams::weights(std::size_t layer) {
  return {values.data() + layers.at(layer).weight_offset, layers[layer].weight_count()};
}
std::span<const double> NetParams::weights(std::size_t layer) const {
  return {values.data() + layers.at(layer).weight_offset, layers[layer].weight_count()};
}
std::span<double> NetParams::bias(std::size_t layer) {
  return {values.data() + layers.at(layer).bias_offset, layers[layer].out_channels};
}
std::span<const double> NetParams::bias(std::size_t layer) const {
  return {values.data() + layers.at(layer).bias_offset, layers[layer].out_channels};
}

NetParams init_params(const NetSpec& spec, std::uint64_t seed) {
  NetParams p(spec);
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    std::mt19937_64 rng(derive_seed(seed, "weights", i));
    const double fan_in = static_cast<double>(p.layers[i].in_channels * 9);
    const double limit = std::sqrt(6.0 / fan_in);
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (auto& w : p.weights(i)) w = dist(rng);
  }
  return p;
}

Image2D forward(const NetParams& params, const Image2D& img) {
  const auto t = run_forward(params, img);
  return Image2D(img.height(), img.width(), t.output.data);
}

BackwardResult backward(const NetParams& params, const Image2D& img, const Image2D& ref,
                        const LossConfig& cfg) {
  require_same_shape(img, ref, "backward");
  const NetSpec& s = params.spec;
  const Tape t = run_forward(params, img);

  BackwardResult r;
  r.prediction = Image2D(img.height(), img.width(), t.output.data);
  r.loss = hybrid_loss(r.prediction, ref, cfg);
  r.grads.assign(params.values.size(), 0.0);

  // Final linear convolution.
  Tensor g(1, img.height(), img.width());
  std::copy(r.loss.grad.data().begin(), r.loss.grad.data().end(), g.data.begin());
  Tensor g_final_in;
  {
    const auto& shape = params.layers[final_layer(s)];
    kernels::conv3x3_backward(
        t.final_in, params.weights(final_layer(s)), g, &g_final_in,
        std::span<double>(r.grads.data() + shape.weight_offset, shape.weight_count()),
        std::span<double>(r.grads.data() + shape.bias_offset, shape.out_channels));
  }
  Tensor g_x;
  if (s.variant == Variant::UPlusO) {
    Tensor g_input_unused;
    split(g_final_in, t.dec[0].b.channels, g_x, g_input_unused);
  } else {
    g_x = std::move(g_final_in);
  }

  // Decoder, shallowest level first (reverse of forward order).
  std::vector<Tensor> g_skip(s.depth);
  for (int l = 0; l < s.depth; ++l) {
    const auto& d = t.dec[l];
    Tensor g_a = conv_relu_backward(params, decoder_layer(s, l, 2), d.a, d.b, g_x, r.grads);
    Tensor g_cat = conv_relu_backward(params, decoder_layer(s, l, 1), d.cat, d.a, g_a, r.grads);
    Tensor g_upconv;
    split(g_cat, t.enc[l].b.channels, g_skip[l], g_upconv);
    Tensor g_up =
        conv_relu_backward(params, decoder_layer(s, l, 0), d.up, d.upconv, g_upconv, r.grads);
    kernels::upsample2_backward(g_up, g_x);
  }

  // Bottleneck.
  const Tensor& bott_in = t.enc[s.depth - 1].pooled;
  Tensor g_ba = conv_relu_backward(params, bottleneck_layer(s, 1), t.bott_a, t.bott_b, g_x, r.grads);
  Tensor g_pooled = conv_relu_backward(params, bottleneck_layer(s, 0), bott_in, t.bott_a, g_ba,
                                       r.grads);

  // Encoder, deepest level first.
  for (int l = s.depth - 1; l >= 0; --l) {
    const auto& lv = t.enc[l];
    Tensor g_b(lv.b.channels, lv.b.height, lv.b.width);
    kernels::maxpool2_backward(g_pooled, lv.argmax, g_b);
    add_into(g_b, g_skip[l]);
    Tensor g_a = conv_relu_backward(params, encoder_layer(l, 1), lv.a, lv.b, g_b, r.grads);
    const Tensor& in = l == 0 ? t.input : t.enc[l - 1].pooled;
    g_pooled = conv_relu_backward(params, encoder_layer(l, 0), in, lv.a, g_a, r.grads, l > 0);
  }
  return r;
}

PredictResult predict_batch(const NetParams& params, std::span<const Image2D> images) {
  PredictResult r;
  r.outputs.reserve(images.size());
  const auto start = std::chrono::steady_clock::now();
  for (const auto& img : images) {
    r.outputs.push_back(forward(params, img));
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  if (!images.empty()) {
    r.seconds_per_image = elapsed.count() / static_cast<double>(images.size());
  }
  return r;
}

}  // namespace mcforge
