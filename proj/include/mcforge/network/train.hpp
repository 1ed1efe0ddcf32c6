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
#include <string>
#include <vector>

#include "mcforge/loss.hpp"
#include "mcforge/network/adam.hpp"
#include "mcforge/network/net.hpp"
#include "mcforge/simulator/dataset.hpp"

namespace mcforge {

struct TrainConfig {
  int stage1_epochs = 60;
  int stage2_epochs = 60;
  std::size_t batch_size = 8;
  double lr0 = 1e-4;
  double decay = 0.96;  // per epoch
  AdamConfig adam{};
  int patience = 10;
  LossConfig stage2_loss = LossConfig::stage2();
  // Mirror each training pair (clean and corrupted together) horizontally
  // and/or vertically, drawn per sample and epoch. Validation is untouched.
  bool augment_flips = false;
  std::uint64_t seed = 0;
};

void validate(const TrainConfig& cfg);

struct TrainingData {
  std::vector<ImagePair> train;
  std::vector<ImagePair> val;
};

struct EpochRecord {
  int stage = 1;
  int epoch = 0;  // index within the stage; the learning rate is lr0 * decay^epoch
  double train_loss = 0.0;
  double train_l1 = 0.0;
  double train_tv = 0.0;
  double val_loss = 0.0;
  double lr = 0.0;
  bool stopped_early = false;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch_stage1 = -1;
  int best_epoch_stage2 = -1;

  friend bool operator==(const TrainHistory&, const TrainHistory&) = default;
};

struct TrainResult {
  NetParams params;
  TrainHistory history;
  NetParams stage1_params;  // handoff weights that stage 2 started from
};

/// Mean per-image hybrid loss of `params` over `pairs` (corrupted -> clean).
double mean_loss(const NetParams& params, const std::vector<ImagePair>& pairs,
                 const LossConfig& cfg);

/// One stage of Adam training with early stopping. Returns the
/// best-validation weights; `history` receives one record per epoch run.
NetParams train_stage(const NetParams& initial, const TrainingData& data, const LossConfig& loss,
                      int epochs, int stage_tag, const TrainConfig& cfg, TrainHistory& history,
                      int* best_epoch = nullptr);

/// Stage 1 with (alpha, beta) = (1, 0), then stage 2 from the best stage-1
/// checkpoint with cfg.stage2_loss (default (1, 1)). Fresh optimizer state and
/// learning-rate schedule in each stage.
TrainResult train_two_stage(const TrainingData& data, const NetSpec& spec, const TrainConfig& cfg);

/// Single-stage baseline ("L1" or "L1 + TV") from the same initial weights.
TrainResult train_single_stage(const TrainingData& data, const NetSpec& spec,
                               const TrainConfig& cfg, const LossConfig& loss, int epochs);

// History file: header "stage,epoch,train_loss,train_l1,train_tv,val_loss,lr,stopped_early".
void save_history(const std::filesystem::path& path, const TrainHistory& history);

}  // namespace mcforge
