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
#include <vector>

#include "mcforge/network/net.hpp"

namespace mcforge {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<double> m;  // first moment, NetParams::values layout
  std::vector<double> v;  // second moment
  std::int64_t step = 0;

  static AdamState zeros(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0}; }
};

struct AdamResult {
  NetParams params;
  AdamState state;
};

/// One bias-corrected Adam update. Pure: inputs are not modified.
AdamResult adam_step(const NetParams& params, const std::vector<double>& grads,
                     const AdamState& state, double lr, const AdamConfig& cfg = {});

}  // namespace mcforge
