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
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mcforge/core/fft.hpp"
#include "mcforge/core/io.hpp"
#include "mcforge/metrics/metrics.hpp"
#include "mcforge/simulator/corrupt.hpp"
#include "mcforge/simulator/dataset.hpp"
#include "mcforge/simulator/phantom.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

namespace mcforge {
namespace {

std::vector<SamplePoint> random_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-0.5, 0.5);
  std::vector<SamplePoint> pts(n);
  for (auto& p : pts) p = {d(rng), d(rng)};
  return pts;
}

double max_rel_to_peak(const std::vector<Complex>& a, const std::vector<Complex>& ref) {
  double err = 0, peak = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    err = std::max(err, std::abs(a[i] - ref[i]));
    peak = std::max(peak, std::abs(ref[i]));
  }
  return err / peak;
}

MotionTrajectory constant(std::size_t n, RigidState s) {
  return {std::vector<RigidState>(n, s)};
}

TEST(Spectrum, OracleMatchesIndependentSummation) {
  const auto img = oracle::random_image(9, 12, 4);
  const auto pts = random_points(20, 1);
  const auto got = dft_eval_oracle(img, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_LT(std::abs(got[i] - oracle::spectrum_at(img, pts[i].kx, pts[i].ky)), 1e-12);
  }
}

TEST(Spectrum, CenterPixelAndConjugateSymmetry) {
  Image2D delta(8, 8, 0.0);
  delta(4, 4) = 1.0;
  for (auto v : dft_eval_oracle(delta, random_points(10, 2))) {
    EXPECT_NEAR(v.real(), 1.0 / 8.0, 1e-15);
    EXPECT_NEAR(v.imag(), 0.0, 1e-15);
  }
  const auto img = oracle::random_image(10, 10, 7);
  auto pts = random_points(16, 3);
  std::vector<SamplePoint> neg;
  for (auto p : pts) {
    // Keep -k inside [-0.5, 0.5).
    if (p.kx == -0.5 || p.ky == -0.5) continue;
    neg.push_back({-p.kx, -p.ky});
  }
  pts.resize(neg.size());
  const auto a = dft_eval_oracle(img, pts);
  const auto b = dft_eval_oracle(img, neg);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LT(std::abs(a[i] - std::conj(b[i])), 1e-12);
}

TEST(Spectrum, GridPointsAgreeWithFft) {
  const auto img = oracle::random_image(16, 12, 8);
  const auto k = fft2(img);
  std::vector<SamplePoint> pts;
  std::vector<Complex> ref;
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t c = 0; c < 12; ++c) {
      pts.push_back(nominal_point(r, c, 16, 12));
      ref.push_back(k(r, c));
    }
  const auto exact = dft_eval_oracle(img, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_LT(std::abs(exact[i] - ref[i]), 1e-10);
  const auto direct = nufft_eval(img, pts, {Engine::Direct});
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_LT(std::abs(direct[i] - ref[i]), 1e-10);
  const auto grid = nufft_eval(img, pts, {Engine::Gridding});
  EXPECT_LT(max_rel_to_peak(grid, ref), 1e-5);
}

TEST(Spectrum, DcIsScaledSum) {
  const auto img = oracle::random_image(20, 20, 5);
  double sum = 0;
  for (double v : img.data()) sum += v;
  const SamplePoint dc{0, 0};
  for (auto engine : {Engine::Direct, Engine::Gridding}) {
    const auto v = nufft_eval(img, std::span(&dc, 1), {engine})[0];
    EXPECT_NEAR(v.real(), sum / 20.0, 1e-5 * sum / 20.0);
    EXPECT_NEAR(v.imag(), 0.0, 1e-9);
  }
}

TEST(Spectrum, GriddingMatchesDirectOn64) {
  // sigma = 2, w = 3 tops out near 5e-5 peak-normalized; typical draws sit well under 1e-5.
  std::vector<double> errs;
  for (std::uint64_t seed = 1; seed <= 9; ++seed) {
    const auto pts = random_points(256, 90 + seed);
    const auto img = seed % 3 == 0 ? oracle::random_image(64, 64, seed)
                                   : phantom(PhantomKind::RandomEllipses, 64, seed);
    const auto g = nufft_eval(img, pts, {Engine::Gridding, 2.0, 3});
    const auto d = nufft_eval(img, pts, {Engine::Direct});
    errs.push_back(max_rel_to_peak(g, d));
    EXPECT_LE(errs.back(), 6e-5) << "seed " << seed;
    EXPECT_LE(max_rel_to_peak(d, dft_eval_oracle(img, pts)), 1e-12);
  }
  std::nth_element(errs.begin(), errs.begin() + 4, errs.end());
  EXPECT_LE(errs[4], 1e-5);
}

TEST(Spectrum, WiderKernelIsMoreAccurate) {
  const auto img = oracle::random_image(32, 32, 6);
  const auto pts = random_points(64, 4);
  const auto ref = dft_eval_oracle(img, pts);
  const double e2 = max_rel_to_peak(nufft_eval(img, pts, {Engine::Gridding, 2.0, 2}), ref);
  const double e4 = max_rel_to_peak(nufft_eval(img, pts, {Engine::Gridding, 2.0, 4}), ref);
  EXPECT_LT(e4, e2);
  EXPECT_LT(e4, 1e-6);
}

TEST(Spectrum, DomainAndParameterErrors) {
  const auto img = oracle::random_image(8, 8, 1);
  const SamplePoint bad{0.5, 0.0};
  EXPECT_THROW(nufft_eval(img, std::span(&bad, 1)), DomainError);
  EXPECT_THROW(nufft_eval(img, std::span(&bad, 1), {Engine::Direct}), DomainError);
  EXPECT_THROW(validate(CorruptionOptions{Engine::Gridding, 1.2, 3}), ParameterError);
  EXPECT_THROW(validate(CorruptionOptions{Engine::Gridding, 2.0, 1}), ParameterError);
  EXPECT_THROW(parse_engine("fast"), ParameterError);
  EXPECT_TRUE(in_band({-0.5, 0.49}));
  EXPECT_FALSE(in_band({0.0, 0.5}));
  EXPECT_NEAR(kaiser_bessel_beta(2.0, 3), 13.8551, 1e-4);
}

TEST(Corrupt, ZeroMotionIsIdentity) {
  const auto img = phantom(PhantomKind::SheppLogan, 64);
  const auto zero = constant(64, {});
  EXPECT_LE(oracle::max_abs_diff(corrupt(img, zero, {Engine::Direct}), img), 1e-9);
  EXPECT_GE(ssim(corrupt(img, zero), img), 0.999);
}

TEST(Corrupt, IntegerTranslationIsCircularShift) {
  const auto img = phantom(PhantomKind::RandomEllipses, 32, 3);
  for (auto [tx, ty] : {std::pair{3L, -2L}, std::pair{-5L, 7L}, std::pair{0L, 1L}}) {
    const auto out =
        corrupt(img, constant(32, {double(tx), double(ty), 0.0}), {Engine::Direct});
    EXPECT_LE(oracle::max_abs_diff(out, oracle::circular_shift(img, tx, ty)), 1e-6);
  }
}

TEST(Corrupt, ConstantRotationMatchesImageRotation) {
  for (auto kind : {PhantomKind::SheppLogan, PhantomKind::RandomEllipses}) {
    const auto img = phantom(kind, 64, 5);
    for (double theta : {10.0, -7.0}) {
      const auto out = corrupt(img, constant(64, {0, 0, theta}));
      EXPECT_GE(ssim(out, oracle::rotate_image(img, theta)), 0.98) << theta;
      // The opposite sense must be clearly worse.
      EXPECT_LT(ssim(out, oracle::rotate_image(img, -theta)),
                ssim(out, oracle::rotate_image(img, theta)) - 0.05);
    }
  }
}

TEST(Corrupt, LibraryImageSpaceHelpersMatchOracles) {
  const auto img = oracle::random_image(13, 10, 2);
  EXPECT_EQ(circular_shift(img, 4, -3), oracle::circular_shift(img, 4, -3));
  EXPECT_LT(oracle::max_abs_diff(rotate_bilinear(img, 23.0), oracle::rotate_image(img, 23.0)),
            1e-12);
}

TEST(Corrupt, LinearAtComplexStage) {
  const auto x = oracle::random_image(16, 16, 1);
  const auto y = oracle::random_image(16, 16, 2);
  Image2D z(16, 16);
  const double a = 0.7, b = -1.3;
  for (std::size_t i = 0; i < z.size(); ++i) z.data()[i] = a * x.data()[i] + b * y.data()[i];
  const auto m = synth(SynthKind::SmoothWalk, {.length = 16, .walk_step = 0.8}, 4);
  for (auto engine : {Engine::Gridding, Engine::Direct}) {
    const auto cx = corrupt_complex(x, m, {engine});
    const auto cy = corrupt_complex(y, m, {engine});
    const auto cz = corrupt_complex(z, m, {engine});
    double err = 0;
    for (std::size_t i = 0; i < cz.size(); ++i)
      err = std::max(err, std::abs(cz.data()[i] - (a * cx.data()[i] + b * cy.data()[i])));
    EXPECT_LT(err, 1e-12);
  }
}

TEST(Corrupt, ParallelMatchesSerialReference) {
  const auto img = to_complex(phantom(PhantomKind::RandomEllipses, 24, 9));
  const auto m = synth(SynthKind::SmoothWalk, {.length = 24, .walk_step = 1.0}, 2);
  const auto serial = corrupt_kspace_reference(img, m);
  EXPECT_LT(oracle::max_abs_diff(corrupt_kspace(img, m, {Engine::Direct}), serial), 1e-12);
  double peak = 0;
  for (auto v : serial.data()) peak = std::max(peak, std::abs(v));
  EXPECT_LT(oracle::max_abs_diff(corrupt_kspace(img, m), serial), 1e-5 * peak);
}

TEST(Corrupt, EachLineUsesItsOwnState) {
  const auto img = oracle::random_image(8, 8, 3);
  MotionTrajectory m = constant(8, {});
  m.states[2] = {1.5, -0.5, 20.0};
  const auto k = corrupt_kspace(to_complex(img), m, {Engine::Direct});
  const auto k0 = fft2(img);
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) {
      const auto kn = nominal_point(r, c, 8, 8);
      Complex expect = k0(r, c);
      if (r == 2) {
        const double t = 20.0 * std::numbers::pi / 180.0;
        const double kx = std::cos(t) * kn.kx + std::sin(t) * kn.ky;
        const double ky = -std::sin(t) * kn.kx + std::cos(t) * kn.ky;
        const bool inside = kx >= -0.5 && kx < 0.5 && ky >= -0.5 && ky < 0.5;
        expect = inside ? oracle::spectrum_at(img, kx, ky) *
                              std::polar(1.0, -2 * std::numbers::pi * (kn.kx * 1.5 - kn.ky * 0.5))
                        : Complex{};
      }
      EXPECT_LT(std::abs(k(r, c) - expect), 1e-12) << r << "," << c;
    }
}

TEST(Corrupt, StateCountMismatch) {
  const auto img = oracle::random_image(8, 8, 1);
  EXPECT_THROW(corrupt(img, constant(7, {})), DimensionError);
  EXPECT_THROW(corrupt_kspace_reference(to_complex(img), constant(9, {})), DimensionError);
}

// Independent rasterizer for the ten-ellipse table, followed by a direct 2D
// Gaussian convolution (the library blurs separably).
Image2D reference_shepp_logan(std::size_t n, double sigma) {
  struct E {
    double a, sx, sy, x0, y0, deg;
  };
  const E table[] = {{1, .69, .92, 0, 0, 0},         {-.8, .6624, .874, 0, -.0184, 0},
                     {-.2, .11, .31, .22, 0, -18},   {-.2, .16, .41, -.22, 0, 18},
                     {.1, .21, .25, 0, .35, 0},      {.1, .046, .046, 0, .1, 0},
                     {.1, .046, .046, 0, -.1, 0},    {.1, .046, .023, -.08, -.605, 0},
                     {.1, .023, .023, 0, -.606, 0},  {.1, .023, .046, .06, -.605, 0}};
  Image2D raw(n, n, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double x = -1.0 + (c + 0.5) * 2.0 / n;
      const double y = 1.0 - (r + 0.5) * 2.0 / n;
      for (const auto& e : table) {
        const double t = e.deg * std::numbers::pi / 180.0;
        const double dx = x - e.x0, dy = y - e.y0;
        const double p = dx * std::cos(t) + dy * std::sin(t);
        const double q = -dx * std::sin(t) + dy * std::cos(t);
        if (p * p / (e.sx * e.sx) + q * q / (e.sy * e.sy) <= 1.0) raw(r, c) += e.a;
      }
    }
  if (sigma == 0.0) return raw;
  const long rad = long(std::ceil(4 * sigma));
  double norm = 0;
  for (long i = -rad; i <= rad; ++i)
    for (long j = -rad; j <= rad; ++j) norm += std::exp(-(i * i + j * j) / (2 * sigma * sigma));
  Image2D out(n, n, 0.0);
  for (long r = 0; r < long(n); ++r)
    for (long c = 0; c < long(n); ++c) {
      double acc = 0;
      for (long i = -rad; i <= rad; ++i)
        for (long j = -rad; j <= rad; ++j) {
          const long rr = r + i, cc = c + j;
          if (rr < 0 || cc < 0 || rr >= long(n) || cc >= long(n)) continue;
          acc += std::exp(-(i * i + j * j) / (2 * sigma * sigma)) * raw(rr, cc);
        }
      out(r, c) = std::clamp(acc / norm, 0.0, 1.0);
    }
  return out;
}

TEST(Phantom, SheppLoganMatchesIndependentRasterizer) {
  EXPECT_LE(oracle::max_abs_diff(phantom(PhantomKind::SheppLogan, 64, 0, 0.0),
                                 reference_shepp_logan(64, 0.0)),
            1.0 / 255);
  EXPECT_LE(oracle::max_abs_diff(phantom(PhantomKind::SheppLogan, 64),
                                 reference_shepp_logan(64, kPhantomPsfSigma)),
            1.0 / 255);
}

TEST(Phantom, RangeDeterminismAndErrors) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = phantom(PhantomKind::RandomEllipses, 32, seed);
    EXPECT_EQ(a, phantom(PhantomKind::RandomEllipses, 32, seed));
    const auto [lo, hi] = std::minmax_element(a.data().begin(), a.data().end());
    EXPECT_GE(*lo, 0.0);
    EXPECT_LE(*hi, 1.0);
    EXPECT_EQ(*hi, 1.0);
  }
  EXPECT_NE(phantom(PhantomKind::RandomEllipses, 32, 1),
            phantom(PhantomKind::RandomEllipses, 32, 2));
  EXPECT_THROW(phantom(PhantomKind::SheppLogan, 15), ParameterError);
  EXPECT_THROW(parse_phantom_kind("cube"), ParameterError);
  EXPECT_THROW(gaussian_blur(Image2D(4, 4), -1.0), ParameterError);
}

TEST(Phantom, BlurPreservesMassAwayFromEdges) {
  Image2D img(21, 21, 0.0);
  img(10, 10) = 1.0;
  const auto b = gaussian_blur(img, 1.5);
  double total = 0;
  for (double v : b.data()) total += v;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(b(10, 9), b(9, 10), 1e-15);
}

TEST(Dataset, SplitCounts) {
  EXPECT_EQ(split_counts(10, {0.6, 0.2, 0.2}, "x"), (std::array<std::size_t, 3>{6, 2, 2}));
  EXPECT_EQ(split_counts(420, {300.0 / 420, 60.0 / 420, 60.0 / 420}, "x"),
            (std::array<std::size_t, 3>{300, 60, 60}));
  EXPECT_THROW(split_counts(2, {0.6, 0.2, 0.2}, "x"), ConfigurationError);
  EXPECT_EQ(split_counts(5, {1.0, 0.0, 0.0}, "x"), (std::array<std::size_t, 3>{5, 0, 0}));
}

DatasetConfig small_config() {
  DatasetConfig cfg;
  cfg.n_images = 10;
  cfg.n_trajectories = 6;
  cfg.size = 16;
  cfg.seed = 21;
  return cfg;
}

TEST(Dataset, SplitsAreDisjointAndSeveritiesInRange) {
  testing::TempDir dir("ds");
  const auto m = build_dataset(small_config(), dir.path());
  ASSERT_EQ(m.records.size(), 10u);
  std::map<Split, std::set<std::string>> clean, traj;
  for (const auto& r : m.records) {
    clean[r.split].insert(r.clean.string());
    traj[r.split].insert(r.trajectory.string());
    EXPECT_GE(r.severity, 0.0);
    EXPECT_LE(r.severity, 15.0);
    EXPECT_NEAR(severity(load_trajectory(m.resolve(r.trajectory))), r.severity, 1e-9);
    const auto c = load_image(m.resolve(r.corrupted));
    EXPECT_EQ(c.height(), 16u);
  }
  EXPECT_EQ(traj.size(), 3u);
  for (auto a : {Split::Train, Split::Val, Split::Test})
    for (auto b : {Split::Train, Split::Val, Split::Test}) {
      if (a == b) continue;
      for (const auto& p : clean[a]) EXPECT_FALSE(clean[b].count(p));
      for (const auto& t : traj[a]) EXPECT_FALSE(traj[b].count(t));
    }
  EXPECT_EQ(load_pairs(m, Split::Train).size(), 6u);
}

TEST(Dataset, CorruptedFilesFollowTheirTrajectories) {
  testing::TempDir dir("ds");
  auto cfg = small_config();
  const auto m = build_dataset(cfg, dir.path());
  for (const auto& r : m.records) {
    const auto clean = load_image(m.resolve(r.clean));
    const auto expect = corrupt(clean, load_trajectory(m.resolve(r.trajectory)), cfg.corruption);
    EXPECT_LT(oracle::max_abs_diff(expect, load_image(m.resolve(r.corrupted))), 1e-12);
  }
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Dataset, RerunIsBitIdentical) {
  testing::TempDir dir("ds");
  const auto cfg = small_config();
  build_dataset(cfg, dir.path());
  const auto manifest = slurp(dir / "manifest.csv");
  const auto first = slurp(dir / "corrupted/pair_00003.mcf");
  std::filesystem::remove_all(dir.path());
  const auto m = build_dataset(cfg, dir.path());
  EXPECT_EQ(slurp(dir / "manifest.csv"), manifest);
  EXPECT_EQ(slurp(dir / "corrupted/pair_00003.mcf"), first);
  EXPECT_EQ(manifest.substr(0, manifest.find('\n')),
            "pair,clean,corrupted,trajectory,severity,split");

  const auto loaded = load_manifest(dir / "manifest.csv");
  ASSERT_EQ(loaded.records.size(), m.records.size());
  for (std::size_t i = 0; i < m.records.size(); ++i) {
    EXPECT_EQ(loaded.records[i].pair_id, m.records[i].pair_id);
    EXPECT_EQ(loaded.records[i].severity, m.records[i].severity);
    EXPECT_EQ(loaded.records[i].split, m.records[i].split);
  }
}

TEST(Dataset, TooFewTrajectories) {
  testing::TempDir dir("ds");
  auto cfg = small_config();
  cfg.n_trajectories = 2;
  EXPECT_THROW(build_dataset(cfg, dir.path()), ConfigurationError);
  EXPECT_THROW(parse_split("holdout"), ParameterError);
}

}  // namespace
}  // namespace mcforge
