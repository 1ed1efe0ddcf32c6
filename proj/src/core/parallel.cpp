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

#include "mcforge/core/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace mcforge {

int configure_threads_from_env() {
  if (const char* env = std::getenv("MCFORGE_THREADS"); env != nullptr && *env != '\0') {
    try {
      const int n = std::stoi(env);
      if (n >= 1) {
        omp_set_num_threads(n);
      }
    } catch (const std::exception&) {
      // Unparseable values leave the OpenMP default in place.
    }
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace mcforge
