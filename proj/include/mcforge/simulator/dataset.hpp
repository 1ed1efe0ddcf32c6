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

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mcforge/core/image.hpp"
#include "mcforge/simulator/phantom.hpp"
#include "mcforge/simulator/spectrum.hpp"

namespace mcforge {

enum class Split { Train, Val, Test };

std::string_view split_name(Split s);
Split parse_split(std::string_view name);

struct DatasetConfig {
  std::size_t n_images = 10;
  std::size_t n_trajectories = 6;
  std::size_t size = 48;
  double severity_min = 0.0;
  double severity_max = 15.0;
  std::array<double, 3> split_fractions{0.6, 0.2, 0.2};  // train, val, test
  std::size_t pairs_per_image = 1;
  PhantomKind phantom = PhantomKind::RandomEllipses;
  CorruptionOptions corruption{};
  std::uint64_t seed = 0;
};

struct ManifestRecord {
  std::string pair_id;
  std::filesystem::path clean;       // relative to the manifest directory
  std::filesystem::path corrupted;
  std::filesystem::path trajectory;
  double severity = 0.0;
  Split split = Split::Train;
};

struct Manifest {
  std::filesystem::path root;  // directory the record paths are relative to
  std::vector<ManifestRecord> records;

  std::filesystem::path resolve(const std::filesystem::path& p) const {
    return p.is_absolute() ? p : root / p;
  }
};

struct ImagePair {
  std::string pair_id;
  Image2D clean;
  Image2D corrupted;
  double severity = 0.0;
};

/// Counts per split (train, val, test): val and test are rounded, train
/// takes the remainder. Throws ConfigurationError if a split with a nonzero
/// fraction would be empty.
std::array<std::size_t, 3> split_counts(std::size_t n, const std::array<double, 3>& fractions,
                                        const char* what);

/// Generates phantoms, trajectories and corrupted images under `out_dir` and
/// writes `out_dir/manifest.csv`. Splits share no phantom and no trajectory.
Manifest build_dataset(const DatasetConfig& cfg, const std::filesystem::path& out_dir);

// Manifest file: comma-separated with header
//   pair,clean,corrupted,trajectory,severity,split
void save_manifest(const std::filesystem::path& path, const Manifest& manifest);
Manifest load_manifest(const std::filesystem::path& path);

std::vector<ImagePair> load_pairs(const Manifest& manifest, Split split);

}  // namespace mcforge
