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

#include <cmath>
#include <fstream>

#include "mcforge/core/error.hpp"
#include "mcforge/trajectory.hpp"
#include "temp_dir.hpp"

namespace mcforge {
namespace {

double brute_pop_std(const std::vector<double>& v) {
  double mean = 0;
  for (double x : v) mean += x;
  mean /= v.size();
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / v.size());
}

TEST(Trajectory, ToInplaneKeepsInplaneAxes) {
  Trajectory6D t6{{{0.5, -0.25, 9.0, 1.0, 2.0, 0.1}, {0.0, 0.0, 3.0, 4.0, 5.0, 0.0}}};
  const auto m = to_inplane(t6);
  EXPECT_DOUBLE_EQ(m.states[0].tx, 4.0);
  EXPECT_DOUBLE_EQ(m.states[0].ty, -2.0);
  EXPECT_DOUBLE_EQ(m.states[0].theta, 0.8);
  EXPECT_EQ(m.states[1], RigidState{});
  const auto m1 = to_inplane(t6, 1.0);
  EXPECT_EQ(m1.states[0], (RigidState{0.5, -0.25, 0.1}));
  EXPECT_THROW(to_inplane(Trajectory6D{}), ParameterError);
  EXPECT_THROW(to_inplane(t6, 0.0), ParameterError);
}

TEST(Trajectory, CenterNormalize) {
  MotionTrajectory m;
  for (int i = 1; i <= 5; ++i) m.states.push_back({double(i), 0, 0});
  const auto c = center_normalize(m);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(c.states[i].tx, i - 2.0);
  EXPECT_EQ(center_normalize(c), c);

  MotionTrajectory k{std::vector<RigidState>(4, {3, 1, 2})};
  for (const auto& s : center_normalize(k).states) EXPECT_EQ(s, RigidState{});
  EXPECT_THROW(center_normalize(MotionTrajectory{}), ParameterError);
}

TEST(Trajectory, SeverityOfAlternatingSignIsOne) {
  MotionTrajectory m;
  for (int i = 0; i < 256; ++i) m.states.push_back({i % 2 ? 1.0 : -1.0, 0, 0});
  EXPECT_DOUBLE_EQ(severity(m), 1.0);
  EXPECT_EQ(severity(MotionTrajectory{std::vector<RigidState>(7, {2, 3, 4})}), 0.0);
  EXPECT_THROW(severity(MotionTrajectory{{RigidState{}}}), DegenerateTrajectoryError);
}

TEST(Trajectory, SeverityAggregations) {
  const auto m = synth(SynthKind::SmoothWalk, {}, 3);
  std::vector<double> tx, ty, th;
  for (const auto& s : m.states) {
    tx.push_back(s.tx);
    ty.push_back(s.ty);
    th.push_back(s.theta);
  }
  const double a = brute_pop_std(tx), b = brute_pop_std(ty), c = brute_pop_std(th);
  EXPECT_NEAR(severity(m), a + b + c, 1e-12);
  EXPECT_NEAR(severity(m, SeverityAggregation::L2), std::sqrt(a * a + b * b + c * c), 1e-12);
}

TEST(Trajectory, SeverityIsShiftInvariant) {
  const auto m = synth(SynthKind::SmoothWalk, {}, 8);
  MotionTrajectory shifted = m;
  for (auto& s : shifted.states) {
    s.tx += 4.5;
    s.ty -= 2.0;
    s.theta += 7.0;
  }
  EXPECT_NEAR(severity(shifted), severity(m), 1e-12);
  EXPECT_NEAR(severity(center_normalize(shifted)), severity(m), 1e-12);
}

class StepSeverity : public ::testing::TestWithParam<std::size_t> {};

TEST_P(StepSeverity, MatchesClosedFormAndBruteForce) {
  const std::size_t t = 256, k = GetParam();
  SynthParams p;
  p.length = t;
  p.jump_index = k;
  const auto m = synth(SynthKind::Step, p, 0);
  std::vector<double> tx;
  for (const auto& s : m.states) tx.push_back(s.tx);
  const double closed = 10.0 * std::sqrt(double(k * (t - k))) / t;
  EXPECT_NEAR(severity(m), closed, 1e-12);
  EXPECT_NEAR(severity(m), brute_pop_std(tx), 1e-12);
  EXPECT_EQ(m.states[t / 2], RigidState{});
}

INSTANTIATE_TEST_SUITE_P(JumpIndices, StepSeverity, ::testing::Values(128u, 1u, 77u, 200u, 256u));

TEST(Trajectory, SynthIsDeterministicAndCentered) {
  const auto a = synth(SynthKind::SmoothWalk, {}, 42);
  const auto b = synth(SynthKind::SmoothWalk, {}, 42);
  const auto c = synth(SynthKind::SmoothWalk, {}, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(a.size(), 256u);
  EXPECT_EQ(a.states[128], RigidState{});

  SynthParams p;
  p.value = {3, 1, 2};
  for (const auto& s : synth(SynthKind::Constant, p, 0).states) EXPECT_EQ(s, RigidState{});
  EXPECT_THROW(parse_synth_kind("zigzag"), ParameterError);
  EXPECT_EQ(parse_synth_kind("smooth_walk"), SynthKind::SmoothWalk);
  p.length = 1;
  EXPECT_THROW(synth(SynthKind::Constant, p, 0), ParameterError);
}

TEST(Trajectory, ScaleIsLinear) {
  const auto m = synth(SynthKind::SmoothWalk, {}, 5);
  EXPECT_NEAR(severity(scale_trajectory(m, 2.5)), 2.5 * severity(m), 1e-12);
  Trajectory6D t6{{{0.3, 0.2, 0, 0, 0, -0.7}}};
  const auto a = to_inplane(t6, 2.0), b = to_inplane(t6, 6.0);
  EXPECT_DOUBLE_EQ(b.states[0].theta, 3.0 * a.states[0].theta);
}

TEST(Trajectory, TextRoundTrip) {
  testing::TempDir dir("traj");
  const auto m = synth(SynthKind::SmoothWalk, {}, 12);
  save_trajectory(dir / "t.txt", m);
  EXPECT_EQ(load_trajectory(dir / "t.txt"), m);

  {
    std::ofstream f(dir / "c.txt");
    f << "# header\n1 2 3\n\n  # note\n-0.5 0 1e-3\n";
  }
  const auto c = load_trajectory(dir / "c.txt");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.states[1], (RigidState{-0.5, 0, 1e-3}));

  {
    std::ofstream f(dir / "bad.txt");
    f << "1 2\n";
  }
  EXPECT_THROW(load_trajectory(dir / "bad.txt"), IoError);
  EXPECT_THROW(load_trajectory(dir / "none.txt"), IoError);
}

}  // namespace
}  // namespace mcforge
