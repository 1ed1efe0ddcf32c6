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

#include "mcforge/network/adam.hpp"

#include <cmath>

namespace mcforge {

AdamResult adam_step(const NetParams& params, const std::vector<double>& grads,
                     const AdamState& state, double lr, const AdamConfig& cfg) {
  const std::size_t n = params.values.size();
  if (grads.size() != n || state.m.size() != n || state.v.size() != n) {
    throw DimensionError("adam_step: parameter, gradient and moment sizes differ");
  }
  AdamResult r{params, state};
  r.state.step = state.step + 1;
  const double t = static_cast<double>(r.state.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grads[i];
    const double m = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
    const double v = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
    r.state.m[i] = m;
    r.state.v[i] = v;
    r.params.values[i] -= lr * (m / c1) / (std::sqrt(v / c2) + cfg.epsilon);
  }
  return r;
}

}  // namespace mcforge
