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
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

namespace mcforge {

/// In-plane rigid pose for one phase-encode line. Translations in pixels
/// (1 px = 1 mm), rotation in degrees about the image center.
struct RigidState {
  double tx = 0.0;
  double ty = 0.0;
  double theta = 0.0;

  friend bool operator==(const RigidState&, const RigidState&) = default;
};

struct Pose6 {
  double tx = 0.0, ty = 0.0, tz = 0.0;
  double rx = 0.0, ry = 0.0, rz = 0.0;
};

struct Trajectory6D {
  std::vector<Pose6> samples;
};

/// One state per k-space line; states[j] applies to ky row j.
struct MotionTrajectory {
  std::vector<RigidState> states;

  std::size_t size() const noexcept { return states.size(); }
  friend bool operator==(const MotionTrajectory&, const MotionTrajectory&) = default;
};

/// Keeps (tx, ty, rz) and multiplies each by `scale`.
MotionTrajectory to_inplane(const Trajectory6D& t6, double scale = 8.0);

/// Subtracts the state at index T/2 from every state.
MotionTrajectory center_normalize(const MotionTrajectory& m);

MotionTrajectory scale_trajectory(const MotionTrajectory& m, double factor);

enum class SeverityAggregation { Sum, L2 };

/// Per-axis population standard deviations combined into one number (mm/deg).
/// Sum is the default; L2 is kept for sensitivity checks.
double severity(const MotionTrajectory& m, SeverityAggregation agg = SeverityAggregation::Sum);

enum class SynthKind { Constant, Step, SmoothWalk };

SynthKind parse_synth_kind(std::string_view name);

struct SynthParams {
  std::size_t length = 256;
  RigidState value{};                    // constant
  RigidState amplitude{10.0, 0.0, 0.0};  // step
  std::optional<std::size_t> jump_index; // step; defaults to length / 2
  double walk_step = 0.3;                // smooth_walk: per-line increment std (px / deg)
  std::size_t smoothing = 9;             // smooth_walk: moving-average width
};

/// Deterministic for a fixed seed; output is already center-normalized.
MotionTrajectory synth(SynthKind kind, const SynthParams& params, std::uint64_t seed);

// Text format: one "tx ty theta" line per state; '#' starts a comment line.
MotionTrajectory load_trajectory(const std::filesystem::path& path);
void save_trajectory(const std::filesystem::path& path, const MotionTrajectory& m);

}  // namespace mcforge
