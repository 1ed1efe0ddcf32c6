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

#include <gtest/gtest.h>

#include <algorithm>

#include "mcforge/core/io.hpp"
#include "mcforge/core/seed.hpp"
#include "mcforge/network/adam.hpp"
#include "mcforge/network/checkpoint.hpp"
#include "mcforge/network/kernels.hpp"
#include "mcforge/network/net.hpp"
#include "mcforge/network/train.hpp"
#include "mcforge/simulator/corrupt.hpp"
#include "mcforge/simulator/phantom.hpp"
#include "gradcheck.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

namespace mcforge {
namespace {

Tensor random_tensor(std::size_t c, std::size_t h, std::size_t w, std::uint64_t seed) {
  Tensor t(c, h, w);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (auto& v : t.data) v = d(rng);
  return t;
}

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  return random_tensor(1, 1, n, seed).data;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Reference conv written against the layout contract, independent of both
// library implementations.
double conv_at(const Tensor& in, const std::vector<double>& w, const std::vector<double>& b,
               std::size_t oc, long y, long x) {
  double acc = b[oc];
  for (std::size_t ic = 0; ic < in.channels; ++ic)
    for (long ky = 0; ky < 3; ++ky)
      for (long kx = 0; kx < 3; ++kx) {
        const long yy = y + ky - 1, xx = x + kx - 1;
        if (yy < 0 || xx < 0 || yy >= long(in.height) || xx >= long(in.width)) continue;
        acc += w[((oc * in.channels + ic) * 3 + ky) * 3 + kx] * in.at(ic, yy, xx);
      }
  return acc;
}

TEST(Kernels, ConvForwardMatchesReferenceAndLayout) {
  const auto in = random_tensor(5, 9, 14, 1);
  const auto w = random_vector(7 * 5 * 9, 2);
  const auto b = random_vector(7, 3);
  Tensor fast, slow;
  kernels::conv3x3_forward(in, w, b, fast);
  reference::conv3x3_forward(in, w, b, slow);
  ASSERT_EQ(fast.channels, 7u);
  EXPECT_LT(max_diff(fast.data, slow.data), 1e-12);
  for (std::size_t oc = 0; oc < 7; ++oc)
    for (long y = 0; y < 9; ++y)
      for (long x = 0; x < 14; ++x) EXPECT_NEAR(fast.at(oc, y, x), conv_at(in, w, b, oc, y, x), 1e-12);
}

TEST(Kernels, ConvBackwardMatchesReference) {
  for (auto [h, w] : {std::pair{8, 8}, std::pair{1, 5}, std::pair{6, 1}, std::pair{3, 11}}) {
    const auto in = random_tensor(4, h, w, 4);
    const auto wt = random_vector(6 * 4 * 9, 5);
    const auto go = random_tensor(6, h, w, 6);
    Tensor gi_fast, gi_slow;
    std::vector<double> gw_fast(wt.size(), 7.0), gw_slow(wt.size()), gb_fast(6, 7.0), gb_slow(6);
    kernels::conv3x3_backward(in, wt, go, &gi_fast, gw_fast, gb_fast);
    reference::conv3x3_backward(in, wt, go, &gi_slow, gw_slow, gb_slow);
    EXPECT_LT(max_diff(gi_fast.data, gi_slow.data), 1e-12);
    EXPECT_LT(max_diff(gw_fast, gw_slow), 1e-11);
    EXPECT_LT(max_diff(gb_fast, gb_slow), 1e-12);
  }
}

TEST(Kernels, ConvBackwardIsTheAdjoint) {
  // <conv(x), g> = <x, conv^T(g)> + <b, sum g> for the linear part.
  const auto in = random_tensor(3, 7, 10, 7);
  const auto wt = random_vector(2 * 3 * 9, 8);
  const std::vector<double> zero_b(2, 0.0);
  const auto go = random_tensor(2, 7, 10, 9);
  Tensor out, gi;
  kernels::conv3x3_forward(in, wt, zero_b, out);
  std::vector<double> gw(wt.size()), gb(2);
  kernels::conv3x3_backward(in, wt, go, &gi, gw, gb);
  double lhs = 0, rhs = 0, wdot = 0;
  for (std::size_t i = 0; i < out.data.size(); ++i) lhs += out.data[i] * go.data[i];
  for (std::size_t i = 0; i < in.data.size(); ++i) rhs += in.data[i] * gi.data[i];
  for (std::size_t i = 0; i < wt.size(); ++i) wdot += wt[i] * gw[i];
  EXPECT_NEAR(lhs, rhs, 1e-10);
  EXPECT_NEAR(lhs, wdot, 1e-10);
}

TEST(Kernels, PoolingAndUpsampling) {
  const auto in = random_tensor(3, 6, 8, 10);
  Tensor p1, p2;
  std::vector<std::uint32_t> a1, a2;
  kernels::maxpool2_forward(in, p1, a1);
  reference::maxpool2_forward(in, p2, a2);
  EXPECT_EQ(p1, p2);
  EXPECT_EQ(a1, a2);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t y = 0; y < 3; ++y)
      for (std::size_t x = 0; x < 4; ++x) {
        const double m = std::max({in.at(c, 2 * y, 2 * x), in.at(c, 2 * y, 2 * x + 1),
                                   in.at(c, 2 * y + 1, 2 * x), in.at(c, 2 * y + 1, 2 * x + 1)});
        EXPECT_EQ(p1.at(c, y, x), m);
      }
  Tensor g(3, 6, 8);
  kernels::maxpool2_backward(p1, a1, g);
  double routed = 0, total = 0;
  for (double v : g.data) routed += v;
  for (double v : p1.data) total += v;
  EXPECT_DOUBLE_EQ(routed, total);

  Tensor u1, u2, gu;
  kernels::upsample2_forward(p1, u1);
  reference::upsample2_forward(p1, u2);
  EXPECT_EQ(u1, u2);
  EXPECT_EQ(u1.at(2, 5, 7), p1.at(2, 2, 3));
  kernels::upsample2_backward(u1, gu);
  EXPECT_DOUBLE_EQ(gu.at(1, 2, 3), 4 * p1.at(1, 2, 3));

  auto r = random_tensor(2, 3, 3, 11);
  const auto before = r;
  kernels::relu_inplace(r);
  auto grad = random_tensor(2, 3, 3, 12);
  const auto g0 = grad;
  kernels::relu_backward(r, grad);
  for (std::size_t i = 0; i < r.data.size(); ++i) {
    EXPECT_EQ(r.data[i], std::max(0.0, before.data[i]));
    EXPECT_EQ(grad.data[i], before.data[i] > 0 ? g0.data[i] : 0.0);
  }
}

TEST(Net, LayoutAndCounts) {
  const NetSpec spec;
  const auto layers = conv_layout(spec);
  ASSERT_EQ(layers.size(), 18u);
  EXPECT_EQ(layers[0].in_channels, 1u);
  EXPECT_EQ(layers[6].out_channels, 64u);
  EXPECT_EQ(layers.back().in_channels, 8u);
  EXPECT_EQ(parameter_count(spec), 134185u);
  NetSpec uo = spec;
  uo.variant = Variant::UPlusO;
  EXPECT_EQ(parameter_count(uo), 134185u + 9u);
  EXPECT_THROW(validate(NetSpec{0, 8, Variant::U}), ParameterError);
  EXPECT_THROW(parse_variant("v"), ParameterError);
  EXPECT_EQ(parse_variant(variant_name(Variant::UPlusO)), Variant::UPlusO);
}

TEST(Net, ShapesAndZeroParams) {
  const NetSpec spec{2, 4, Variant::U};
  const auto p = init_params(spec, 1);
  for (std::size_t n : {32u, 64u}) {
    const auto out = forward(p, oracle::random_image(n, n, 2));
    EXPECT_EQ(out.height(), n);
    EXPECT_EQ(out.width(), n);
  }
  EXPECT_EQ(forward(p, oracle::random_image(16, 24, 2)).width(), 24u);
  EXPECT_THROW(forward(p, oracle::random_image(18, 16, 2)), DimensionError);
  const NetParams zero(spec);
  for (double v : forward(zero, oracle::random_image(16, 16, 3)).data()) EXPECT_EQ(v, 0.0);
  for (auto b : p.bias(0)) EXPECT_EQ(b, 0.0);

  const auto r = backward(zero, oracle::random_image(16, 16, 3), Image2D(16, 16, 0.0),
                          LossConfig::stage1());
  EXPECT_EQ(r.loss.value, 0.0);
  for (double g : r.grads) EXPECT_EQ(g, 0.0);
}

TEST(Net, BackwardMatchesFiniteDifferences) {
  const auto img = phantom(PhantomKind::RandomEllipses, 16, 4, 0.7);
  const auto ref = oracle::random_image(16, 16, 5);
  for (auto variant : {Variant::U, Variant::UPlusO}) {
    const auto p = testing::jittered({2, 3, variant}, 6);
    for (auto cfg : {LossConfig::stage1(), LossConfig::stage2(), LossConfig{0.5, 3.0}}) {
      const auto s = testing::check_net_gradients(p, img, ref, cfg, 6, 7);
      EXPECT_GT(s.checked, 5 * s.skipped + 20);
      EXPECT_LE(s.worst, 1e-3);
      for (const auto& f : s.failures) ADD_FAILURE() << f;
    }
  }
}

TEST(Net, UPlusOGradientsDifferOnlyAfterConcatenation) {
  const NetSpec su{2, 4, Variant::U};
  const auto pu = init_params(su, 9);
  const auto puo_seeded = init_params({2, 4, Variant::UPlusO}, 9);
  for (std::size_t i = 0; i + 1 < pu.layers.size(); ++i) {
    EXPECT_TRUE(std::ranges::equal(pu.weights(i), puo_seeded.weights(i))) << i;
  }

  // Same weights plus a zero input-channel slice: forward is unchanged.
  NetParams puo({2, 4, Variant::UPlusO});
  std::copy(pu.values.begin(), pu.values.end() - 1, puo.values.begin());
  puo.bias(puo.layers.size() - 1)[0] = pu.values.back();
  const auto img = oracle::random_image(16, 16, 1);
  const auto ref = oracle::random_image(16, 16, 2);
  EXPECT_EQ(forward(pu, img), forward(puo, img));

  const auto gu = backward(pu, img, ref, LossConfig::stage2());
  const auto guo = backward(puo, img, ref, LossConfig::stage2());
  const std::size_t last = pu.layers.size() - 1;
  const auto& lu = pu.layers[last];
  for (std::size_t i = 0; i < lu.weight_offset; ++i) ASSERT_EQ(gu.grads[i], guo.grads[i]) << i;
  for (std::size_t i = 0; i < lu.weight_count(); ++i)
    EXPECT_EQ(gu.grads[lu.weight_offset + i], guo.grads[lu.weight_offset + i]);
  const auto& lo = puo.layers[last];
  double input_slice = 0;
  for (std::size_t i = lu.weight_count(); i < lo.weight_count(); ++i)
    input_slice += std::abs(guo.grads[lo.weight_offset + i]);
  EXPECT_GT(input_slice, 0.0);
}

TEST(Net, UPlusOIdentityKernelPassesInputThrough) {
  NetParams p = init_params({3, 4, Variant::UPlusO}, 3);
  const std::size_t last = p.layers.size() - 1;
  auto w = p.weights(last);
  std::fill(w.begin(), w.end(), 0.0);
  const std::size_t input_channel = p.layers[last].in_channels - 1;
  w[input_channel * 9 + 4] = 1.0;
  p.bias(last)[0] = 0.0;
  const auto img = phantom(PhantomKind::RandomEllipses, 48, 2);
  EXPECT_EQ(forward(p, img), img);
}

TEST(Net, PredictBatchMatchesForward) {
  const auto p = init_params({2, 4, Variant::U}, 4);
  std::vector<Image2D> imgs;
  for (int i = 0; i < 3; ++i) imgs.push_back(oracle::random_image(16, 16, 20 + i));
  const auto r = predict_batch(p, imgs);
  ASSERT_EQ(r.outputs.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(r.outputs[i], forward(p, imgs[i]));
  EXPECT_GT(r.seconds_per_image, 0.0);
}

TEST(Adam, FirstStepAndPurity) {
  NetParams p({1, 1, Variant::U});
  for (std::size_t i = 0; i < p.values.size(); ++i) p.values[i] = 0.01 * i;
  std::vector<double> g(p.values.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = (i % 3 == 0 ? -1.0 : 0.5) * (1 + i % 5);
  const auto state = AdamState::zeros(p.values.size());
  const double lr = 1e-3, eps = 1e-8;
  const auto a = adam_step(p, g, state, lr);
  const auto b = adam_step(p, g, state, lr);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.state.m, b.state.m);
  EXPECT_EQ(a.state.step, 1);
  EXPECT_EQ(state.step, 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(a.params.values[i], p.values[i] - lr * g[i] / (std::abs(g[i]) + eps), 1e-15);
    EXPECT_NEAR(a.state.m[i], 0.1 * g[i], 1e-15);
    EXPECT_NEAR(a.state.v[i], 0.001 * g[i] * g[i], 1e-15);
  }
  const std::vector<double> zero(g.size(), 0.0);
  const auto c = adam_step(a.params, zero, a.state, lr);
  EXPECT_NEAR(c.state.m[1], 0.9 * a.state.m[1], 1e-18);
  EXPECT_NEAR(c.state.v[1], 0.999 * a.state.v[1], 1e-18);
  // The first-moment estimate still carries the earlier gradient.
  EXPECT_NE(c.params.values[1], a.params.values[1]);
  const auto fresh = adam_step(p, zero, state, lr);
  EXPECT_EQ(fresh.params, p);
  EXPECT_THROW(adam_step(p, std::vector<double>(3), state, lr), DimensionError);
}

TEST(Checkpoint, RoundTripAndErrors) {
  testing::TempDir dir("ckpt");
  const auto p = init_params({2, 3, Variant::UPlusO}, 8);
  save_checkpoint(dir / "m.mcp", p);
  EXPECT_EQ(load_checkpoint(dir / "m.mcp"), p);
  EXPECT_EQ(std::filesystem::file_size(dir / "m.mcp"), 13 + 8 * p.values.size());

  std::filesystem::resize_file(dir / "m.mcp", 100);
  EXPECT_THROW(load_checkpoint(dir / "m.mcp"), FormatError);
  save_image(dir / "x.mcf", Image2D(2, 2));
  EXPECT_THROW(load_checkpoint(dir / "x.mcf"), FormatError);
  EXPECT_THROW(load_checkpoint(dir / "missing.mcp"), IoError);
}

TrainingData tiny_data(std::size_t n_train, std::size_t n_val) {
  TrainingData d;
  for (std::size_t i = 0; i < n_train + n_val; ++i) {
    ImagePair p;
    p.pair_id = "p" + std::to_string(i);
    p.clean = phantom(PhantomKind::RandomEllipses, 16, i);
    MotionTrajectory m{std::vector<RigidState>(16, {1.0 + (i % 3), -1.0, 4.0})};
    for (std::size_t j = 0; j < 8; ++j) m.states[j] = {};
    p.corrupted = corrupt(p.clean, m);
    (i < n_train ? d.train : d.val).push_back(std::move(p));
  }
  return d;
}

TrainConfig tiny_config() {
  TrainConfig cfg;
  cfg.stage1_epochs = 4;
  cfg.stage2_epochs = 3;
  cfg.batch_size = 3;
  cfg.lr0 = 1e-3;
  cfg.seed = 17;
  return cfg;
}

TEST(Train, ScheduleDeterminismAndHandoff) {
  const auto data = tiny_data(7, 3);
  const NetSpec spec{2, 3, Variant::U};
  const auto cfg = tiny_config();
  const auto a = train_two_stage(data, spec, cfg);
  const auto b = train_two_stage(data, spec, cfg);
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.params, b.params);

  ASSERT_EQ(a.history.epochs.size(), 7u);
  for (const auto& rec : a.history.epochs) {
    EXPECT_NEAR(rec.lr, cfg.lr0 * std::pow(0.96, rec.epoch), 1e-12);
    EXPECT_GE(rec.train_tv, 0.0);
  }
  EXPECT_EQ(a.history.epochs[3].stage, 1);
  EXPECT_EQ(a.history.epochs[4].stage, 2);
  EXPECT_EQ(a.history.epochs[4].epoch, 0);
  EXPECT_LT(a.history.epochs[3].train_loss, a.history.epochs[0].train_loss);
  // Stage-1 records carry the L1 objective only.
  EXPECT_EQ(a.history.epochs[0].train_loss, a.history.epochs[0].train_l1);

  // Stage 2 starts from the returned stage-1 weights: running it alone from
  // that handoff reproduces the second half of the history.
  TrainHistory h2;
  const auto resumed =
      train_stage(a.stage1_params, data, cfg.stage2_loss, cfg.stage2_epochs, 2, cfg, h2);
  EXPECT_EQ(resumed, a.params);
  EXPECT_EQ(h2.epochs, std::vector<EpochRecord>(a.history.epochs.begin() + 4, a.history.epochs.end()));
  // The handoff is the best-validation stage-1 model.
  double best = 1e300;
  for (int e = 0; e < 4; ++e) best = std::min(best, a.history.epochs[e].val_loss);
  EXPECT_EQ(mean_loss(a.stage1_params, data.val, LossConfig::stage1()), best);
}

TEST(Train, ScheduleDegeneracies) {
  const auto data = tiny_data(6, 2);
  const NetSpec spec{2, 3, Variant::U};
  auto cfg = tiny_config();

  cfg.stage2_epochs = 0;
  const auto l1_two = train_two_stage(data, spec, cfg);
  const auto l1_one = train_single_stage(data, spec, cfg, LossConfig::stage1(), cfg.stage1_epochs);
  EXPECT_EQ(l1_two.params, l1_one.params);
  EXPECT_EQ(l1_two.history.epochs, l1_one.history.epochs);

  cfg = tiny_config();
  cfg.stage1_epochs = 0;
  const auto tv_two = train_two_stage(data, spec, cfg);
  const auto tv_one = train_single_stage(data, spec, cfg, LossConfig::stage2(), cfg.stage2_epochs);
  EXPECT_EQ(tv_two.params, tv_one.params);
  ASSERT_EQ(tv_two.history.epochs.size(), tv_one.history.epochs.size());
  for (std::size_t i = 0; i < tv_one.history.epochs.size(); ++i) {
    auto r = tv_two.history.epochs[i];
    r.stage = 1;
    EXPECT_EQ(r, tv_one.history.epochs[i]);
  }
}

TEST(Train, FlipAugmentationIsDeterministic) {
  const auto data = tiny_data(6, 2);
  const NetSpec spec{2, 3, Variant::U};
  auto cfg = tiny_config();
  const auto plain = train_two_stage(data, spec, cfg);
  cfg.augment_flips = true;
  const auto a = train_two_stage(data, spec, cfg);
  const auto b = train_two_stage(data, spec, cfg);
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.params, b.params);
  EXPECT_NE(a.params, plain.params);

  cfg.stage2_epochs = 0;
  const auto two = train_two_stage(data, spec, cfg);
  const auto one = train_single_stage(data, spec, cfg, LossConfig::stage1(), cfg.stage1_epochs);
  EXPECT_EQ(two.params, one.params);
  EXPECT_EQ(two.history.epochs, one.history.epochs);
}

TEST(Train, EarlyStoppingReturnsBestModel) {
  const auto data = tiny_data(6, 3);
  auto cfg = tiny_config();
  cfg.lr0 = 0.2;  // deliberately unstable so validation stalls
  cfg.patience = 1;
  TrainHistory h;
  int best_epoch = -2;
  const auto init = init_params({2, 3, Variant::U}, 1);
  const auto p = train_stage(init, data, LossConfig::stage1(), 12, 1, cfg, h, &best_epoch);
  ASSERT_FALSE(h.epochs.empty());
  ASSERT_GE(best_epoch, 0);
  const double returned = mean_loss(p, data.val, LossConfig::stage1());
  EXPECT_EQ(returned, h.epochs[best_epoch].val_loss);
  for (const auto& rec : h.epochs) EXPECT_LE(returned, rec.val_loss);
  if (h.epochs.size() < 12u) {
    EXPECT_TRUE(h.epochs.back().stopped_early);
    EXPECT_EQ(static_cast<int>(h.epochs.size()), best_epoch + 1 + cfg.patience);
  }
}

TEST(Train, ConfigurationErrors) {
  const NetSpec spec{2, 3, Variant::U};
  auto data = tiny_data(3, 0);
  EXPECT_THROW(train_two_stage(data, spec, tiny_config()), ConfigurationError);
  data = tiny_data(3, 1);
  auto cfg = tiny_config();
  cfg.patience = 0;
  EXPECT_THROW(train_two_stage(data, spec, cfg), ConfigurationError);
  cfg = tiny_config();
  cfg.batch_size = 0;
  EXPECT_THROW(train_two_stage(data, spec, cfg), ConfigurationError);
}

}  // namespace
}  // namespace mcforge
