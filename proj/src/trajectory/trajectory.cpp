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

#include "mcforge/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "mcforge/core/error.hpp"

namespace mcforge {
namespace {

double population_std(const MotionTrajectory& m, double RigidState::*axis) {
  const double n = static_cast<double>(m.size());
  double mean = 0.0;
  for (const auto& s : m.states) {
    mean += s.*axis;
  }
  mean /= n;
  double ss = 0.0;
  for (const auto& s : m.states) {
    const double d = s.*axis - mean;
    ss += d * d;
  }
  return std::sqrt(ss / n);
}

}  // namespace

MotionTrajectory to_inplane(const Trajectory6D& t6, double scale) {
  if (t6.samples.empty()) {
    throw ParameterError("to_inplane: empty trajectory");
  }
  if (!(scale > 0.0)) {
    throw ParameterError("to_inplane: scale must be positive");
  }
  MotionTrajectory out;
  out.states.reserve(t6.samples.size());
  for (const auto& p : t6.samples) {
    out.states.push_back({p.tx * scale, p.ty * scale, p.rz * scale});
  }
  return out;
}

MotionTrajectory center_normalize(const MotionTrajectory& m) {
  if (m.states.empty()) {
    throw ParameterError("center_normalize: empty trajectory");
  }
  const RigidState c = m.states[m.size() / 2];
  MotionTrajectory out = m;
  for (auto& s : out.states) {
    s.tx -= c.tx;
    s.ty -= c.ty;
    s.theta -= c.theta;
  }
  return out;
}

MotionTrajectory scale_trajectory(const MotionTrajectory& m, double factor) {
  MotionTrajectory out = m;
  for (auto& s : out.states) {
    s.tx *= factor;
    s.ty *= factor;
    s.theta *= factor;
  }
  return out;
}

double severity(const MotionTrajectory& m, SeverityAggregation agg) {
  if (m.size() < 2) {
    throw DegenerateTrajectoryError("severity needs at least 2 states, got " +
                                    std::to_string(m.size()));
  }
  const double sx = population_std(m, &RigidState::tx);
  const double sy = population_std(m, &RigidState::ty);
  const double st = population_std(m, &RigidState::theta);
  if (agg == SeverityAggregation::L2) {
    return std::sqrt(sx * sx + sy * sy + st * st);
  }
  return sx + sy + st;
}

SynthKind parse_synth_kind(std::string_view name) {
  if (name == "constant") return SynthKind::Constant;
  if (name == "step") return SynthKind::Step;
  if (name == "smooth_walk") return SynthKind::SmoothWalk;
  throw ParameterError("unknown trajectory kind '" + std::string(name) + "'");
}

MotionTrajectory synth(SynthKind kind, const SynthParams& params, std::uint64_t seed) {
  const std::size_t n = params.length;
  if (n < 2) {
    throw ParameterError("synth: trajectory length must be at least 2");
  }
  MotionTrajectory m;
  m.states.resize(n);
  switch (kind) {
    case SynthKind::Constant:
      std::fill(m.states.begin(), m.states.end(), params.value);
      break;
    case SynthKind::Step: {
      const std::size_t k = params.jump_index.value_or(n / 2);
      if (k > n) {
        throw ParameterError("synth: jump index beyond trajectory length");
      }
      for (std::size_t j = k; j < n; ++j) {
        m.states[j] = params.amplitude;
      }
      break;
    }
    case SynthKind::SmoothWalk: {
      if (params.smoothing == 0) {
        throw ParameterError("synth: smoothing width must be positive");
      }
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> step(0.0, params.walk_step);
      std::vector<RigidState> raw(n);
      for (std::size_t j = 1; j < n; ++j) {
        raw[j].tx = raw[j - 1].tx + step(rng);
        raw[j].ty = raw[j - 1].ty + step(rng);
        raw[j].theta = raw[j - 1].theta + step(rng);
      }
      // Centered moving average with edge clamping.
      const auto half = static_cast<std::ptrdiff_t>(params.smoothing / 2);
      const auto last = static_cast<std::ptrdiff_t>(n) - 1;
      for (std::ptrdiff_t j = 0; j <= last; ++j) {
        RigidState acc{};
        std::ptrdiff_t count = 0;
        for (std::ptrdiff_t d = -half; d <= half; ++d) {
          const auto idx = std::clamp<std::ptrdiff_t>(j + d, 0, last);
          acc.tx += raw[idx].tx;
          acc.ty += raw[idx].ty;
          acc.theta += raw[idx].theta;
          ++count;
        }
        m.states[j] = {acc.tx / count, acc.ty / count, acc.theta / count};
      }
      break;
    }
  }
  return center_normalize(m);
}

MotionTrajectory load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open trajectory " + path.string());
  }
  MotionTrajectory m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    std::istringstream ss(line);
    RigidState s;
    std::string extra;
    if (!(ss >> s.tx >> s.ty >> s.theta) || (ss >> extra)) {
      throw IoError(path.string() + ":" + std::to_string(lineno) +
                    ": expected three numbers 'tx ty theta'");
    }
    m.states.push_back(s);
  }
  return m;
}

void save_trajectory(const std::filesystem::path& path, const MotionTrajectory& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write trajectory " + path.string());
  }
  out << "# tx[px] ty[px] theta[deg], one line per phase-encode line\n";
  char buf[96];
  for (const auto& s : m.states) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", s.tx, s.ty, s.theta);
    out << buf;
  }
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

}  // namespace mcforge
