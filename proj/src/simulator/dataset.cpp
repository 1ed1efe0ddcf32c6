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

#include "mcforge/simulator/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "mcforge/core/io.hpp"
#include "mcforge/core/seed.hpp"
#include "mcforge/simulator/corrupt.hpp"
#include "mcforge/trajectory.hpp"

namespace mcforge {
namespace {

constexpr const char* kManifestHeader = "pair,clean,corrupted,trajectory,severity,split";

std::string numbered(const char* prefix, std::size_t i, int width, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%0*zu%s", prefix, width, i, ext);
  return buf;
}

// Trajectory shape from its own seed, rescaled to hit `target` severity.
MotionTrajectory make_trajectory(std::size_t length, double target, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MotionTrajectory shape;
  if (unit(rng) < 0.25) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    SynthParams p;
    p.length = length;
    p.amplitude = {gauss(rng), gauss(rng), gauss(rng)};
    p.jump_index = length / 4 + static_cast<std::size_t>(unit(rng) * static_cast<double>(length / 2));
    shape = synth(SynthKind::Step, p, seed);
  } else {
    SynthParams p;
    p.length = length;
    shape = synth(SynthKind::SmoothWalk, p, rng());
  }
  const double s0 = severity(shape);
  if (s0 <= 0.0 || target <= 0.0) {
    return scale_trajectory(shape, 0.0);
  }
  return scale_trajectory(shape, target / s0);
}

}  // namespace

std::string_view split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::Train;
  if (name == "val") return Split::Val;
  if (name == "test") return Split::Test;
  throw ParameterError("unknown split '" + std::string(name) + "'");
}

std::array<std::size_t, 3> split_counts(std::size_t n, const std::array<double, 3>& fractions,
                                        const char* what) {
  for (double f : fractions) {
    if (!(f >= 0.0)) {
      throw ConfigurationError("split fractions must be non-negative");
    }
  }
  const double total = fractions[0] + fractions[1] + fractions[2];
  if (!(total > 0.0)) {
    throw ConfigurationError("split fractions sum to zero");
  }
  const auto nv = static_cast<std::size_t>(std::llround(fractions[1] / total * n));
  const auto nt = static_cast<std::size_t>(std::llround(fractions[2] / total * n));
  if (nv + nt > n) {
    throw ConfigurationError(std::string("not enough ") + what + " for the requested splits");
  }
  const std::array<std::size_t, 3> counts{n - nv - nt, nv, nt};
  for (int s = 0; s < 3; ++s) {
    if (fractions[s] > 0.0 && counts[s] == 0) {
      throw ConfigurationError(std::string("insufficient distinct ") + what +
                               " for disjoint splits: " + std::to_string(n) + " given");
    }
  }
  return counts;
}

Manifest build_dataset(const DatasetConfig& cfg, const std::filesystem::path& out_dir) {
  if (cfg.n_images < 1 || cfg.n_trajectories < 1 || cfg.pairs_per_image < 1) {
    throw ConfigurationError("image, trajectory and pairs-per-image counts must be >= 1");
  }
  if (!(cfg.severity_min >= 0.0) || !(cfg.severity_max >= cfg.severity_min)) {
    throw ConfigurationError("severity range must satisfy 0 <= min <= max");
  }
  validate(cfg.corruption);
  const auto image_counts = split_counts(cfg.n_images, cfg.split_fractions, "images");
  const auto traj_counts = split_counts(cfg.n_trajectories, cfg.split_fractions, "trajectories");

  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "clean");
  fs::create_directories(out_dir / "corrupted");
  fs::create_directories(out_dir / "trajectories");

  // Trajectories: contiguous index ranges per split, severities stratified
  // over [min, max] within each split so every split spans the range.
  std::vector<MotionTrajectory> trajectories;
  std::vector<double> severities;
  std::array<std::vector<std::size_t>, 3> pools;
  {
    std::size_t t = 0;
    for (int s = 0; s < 3; ++s) {
      for (std::size_t i = 0; i < traj_counts[s]; ++i, ++t) {
        std::mt19937_64 rng(derive_seed(cfg.seed, "severity", t));
        const double jitter = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const double target = cfg.severity_min + (cfg.severity_max - cfg.severity_min) *
                                                     (static_cast<double>(i) + jitter) /
                                                     static_cast<double>(traj_counts[s]);
        auto m = make_trajectory(cfg.size, target, derive_seed(cfg.seed, "trajectory", t));
        severities.push_back(std::clamp(severity(m), cfg.severity_min, cfg.severity_max));
        save_trajectory(out_dir / "trajectories" / numbered("traj", t, 4, ".txt"), m);
        trajectories.push_back(std::move(m));
        pools[s].push_back(t);
      }
    }
  }

  Manifest manifest;
  manifest.root = out_dir;
  std::size_t image = 0;
  std::size_t pair = 0;
  for (int s = 0; s < 3; ++s) {
    for (std::size_t local = 0; local < image_counts[s]; ++local, ++image) {
      const auto clean = phantom(cfg.phantom, cfg.size, derive_seed(cfg.seed, "phantom", image));
      const auto clean_rel = fs::path("clean") / numbered("image", image, 5, ".mcf");
      save_image(out_dir / clean_rel, clean);
      for (std::size_t p = 0; p < cfg.pairs_per_image; ++p, ++pair) {
        const auto& pool = pools[s];
        const std::size_t t = pool[(local * cfg.pairs_per_image + p) % pool.size()];
        const auto corrupted = corrupt(clean, trajectories[t], cfg.corruption);
        ManifestRecord rec;
        rec.pair_id = numbered("pair", pair, 5, "");
        rec.clean = clean_rel;
        rec.corrupted = fs::path("corrupted") / (rec.pair_id + ".mcf");
        rec.trajectory = fs::path("trajectories") / numbered("traj", t, 4, ".txt");
        rec.severity = severities[t];
        rec.split = static_cast<Split>(s);
        save_image(out_dir / rec.corrupted, corrupted);
        manifest.records.push_back(std::move(rec));
      }
    }
  }
  save_manifest(out_dir / "manifest.csv", manifest);
  return manifest;
}

void save_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write manifest " + path.string());
  }
  out << kManifestHeader << '\n';
  char sev[40];
  for (const auto& r : manifest.records) {
    std::snprintf(sev, sizeof sev, "%.17g", r.severity);
    out << r.pair_id << ',' << r.clean.generic_string() << ',' << r.corrupted.generic_string()
        << ',' << r.trajectory.generic_string() << ',' << sev << ',' << split_name(r.split)
        << '\n';
  }
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open manifest " + path.string());
  }
  Manifest manifest;
  manifest.root = path.parent_path();
  std::string line;
  if (!std::getline(in, line) || line != kManifestHeader) {
    throw IoError(path.string() + ": missing or unexpected manifest header");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 6) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 6 fields");
    }
    ManifestRecord r;
    r.pair_id = fields[0];
    r.clean = fields[1];
    r.corrupted = fields[2];
    r.trajectory = fields[3];
    try {
      r.severity = std::stod(fields[4]);
    } catch (const std::exception&) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": bad severity");
    }
    r.split = parse_split(fields[5]);
    manifest.records.push_back(std::move(r));
  }
  return manifest;
}

std::vector<ImagePair> load_pairs(const Manifest& manifest, Split split) {
  std::vector<ImagePair> out;
  for (const auto& r : manifest.records) {
    if (r.split != split) continue;
    try {
      out.push_back({r.pair_id, load_image(manifest.resolve(r.clean)),
                     load_image(manifest.resolve(r.corrupted)), r.severity});
    } catch (const Error& e) {
      throw IoError("pair " + r.pair_id + ": " + e.what());
    }
  }
  return out;
}

}  // namespace mcforge
