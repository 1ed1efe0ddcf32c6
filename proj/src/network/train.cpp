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

#include "mcforge/network/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "mcforge/core/seed.hpp"
#include "mcforge/metrics/evaluation.hpp"

namespace mcforge {

void validate(const TrainConfig& cfg) {
  if (cfg.stage1_epochs < 0 || cfg.stage2_epochs < 0) {
    throw ConfigurationError("epoch counts must be non-negative");
  }
  if (cfg.batch_size < 1) throw ConfigurationError("batch size must be >= 1");
  if (!(cfg.lr0 > 0.0)) throw ConfigurationError("learning rate must be positive");
  if (!(cfg.decay > 0.0)) throw ConfigurationError("decay must be positive");
  if (cfg.patience < 1) throw ConfigurationError("patience must be >= 1");
  if (cfg.stage2_loss.alpha < 0.0 || cfg.stage2_loss.beta < 0.0) {
    throw ConfigurationError("loss weights must be non-negative");
  }
}

double mean_loss(const NetParams& params, const std::vector<ImagePair>& pairs,
                 const LossConfig& cfg) {
  if (pairs.empty()) return 0.0;
  double total = 0.0;
  for (const auto& p : pairs) {
    total += hybrid_loss(forward(params, p.corrupted), p.clean, cfg).value;
  }
  return total / static_cast<double>(pairs.size());
}

NetParams train_stage(const NetParams& initial, const TrainingData& data, const LossConfig& loss,
                      int epochs, int stage_tag, const TrainConfig& cfg, TrainHistory& history,
                      int* best_epoch) {
  validate(cfg);
  if (data.train.empty() || data.val.empty()) {
    throw ConfigurationError("training needs non-empty train and validation splits");
  }
  NetParams params = initial;
  NetParams best = initial;
  double best_val = std::numeric_limits<double>::infinity();
  int since_best = 0;
  if (best_epoch != nullptr) *best_epoch = -1;
  AdamState adam = AdamState::zeros(params.values.size());
  std::vector<std::size_t> order(data.train.size());

  for (int e = 0; e < epochs; ++e) {
    const double lr = cfg.lr0 * std::pow(cfg.decay, e);
    // Shuffle stream depends on the seed and the epoch within the stage only,
    // so a stage run alone matches the same stage inside a two-stage run.
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(derive_seed(cfg.seed, "shuffle", static_cast<std::uint64_t>(e)));
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<unsigned> flips(order.size(), 0u);
    if (cfg.augment_flips) {
      std::mt19937_64 frng(derive_seed(cfg.seed, "flip", static_cast<std::uint64_t>(e)));
      for (auto& f : flips) f = static_cast<unsigned>(frng() & 3u);
    }

    double sum_loss = 0.0, sum_l1 = 0.0, sum_tv = 0.0;
    std::vector<double> batch_grad(params.values.size());
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      std::fill(batch_grad.begin(), batch_grad.end(), 0.0);
      // Ordered summation keeps the update independent of scheduling.
      for (std::size_t i = start; i < end; ++i) {
        const auto& pair = data.train[order[i]];
        const unsigned f = flips[i];
        const auto r = f == 0u ? backward(params, pair.corrupted, pair.clean, loss)
                               : backward(params, flip(pair.corrupted, f & 1u, f & 2u),
                                          flip(pair.clean, f & 1u, f & 2u), loss);
        sum_loss += r.loss.value;
        sum_l1 += r.loss.l1;
        sum_tv += r.loss.tv;
        for (std::size_t k = 0; k < batch_grad.size(); ++k) batch_grad[k] += r.grads[k];
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      for (auto& g : batch_grad) g *= inv;
      auto step = adam_step(params, batch_grad, adam, lr, cfg.adam);
      params = std::move(step.params);
      adam = std::move(step.state);
    }

    const auto n = static_cast<double>(data.train.size());
    EpochRecord rec;
    rec.stage = stage_tag;
    rec.epoch = e;
    rec.train_loss = sum_loss / n;
    rec.train_l1 = sum_l1 / n;
    rec.train_tv = sum_tv / n;
    rec.val_loss = mean_loss(params, data.val, loss);
    rec.lr = lr;

    if (rec.val_loss < best_val) {
      best_val = rec.val_loss;
      best = params;
      since_best = 0;
      if (best_epoch != nullptr) *best_epoch = e;
    } else {
      ++since_best;
    }
    rec.stopped_early = since_best >= cfg.patience && e + 1 < epochs;
    history.epochs.push_back(rec);
    if (rec.stopped_early) break;
  }
  return best;
}

TrainResult train_two_stage(const TrainingData& data, const NetSpec& spec, const TrainConfig& cfg) {
  validate(cfg);
  TrainResult r;
  const auto init = init_params(spec, derive_seed(cfg.seed, "init"));
  r.stage1_params = train_stage(init, data, LossConfig::stage1(), cfg.stage1_epochs, 1, cfg,
                                r.history, &r.history.best_epoch_stage1);
  r.params = train_stage(r.stage1_params, data, cfg.stage2_loss, cfg.stage2_epochs, 2, cfg,
                         r.history, &r.history.best_epoch_stage2);
  return r;
}

TrainResult train_single_stage(const TrainingData& data, const NetSpec& spec,
                               const TrainConfig& cfg, const LossConfig& loss, int epochs) {
  validate(cfg);
  TrainResult r;
  const auto init = init_params(spec, derive_seed(cfg.seed, "init"));
  r.stage1_params = init;
  r.params = train_stage(init, data, loss, epochs, 1, cfg, r.history, &r.history.best_epoch_stage1);
  return r;
}

void save_history(const std::filesystem::path& path, const TrainHistory& history) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write history " + path.string());
  }
  out << "stage,epoch,train_loss,train_l1,train_tv,val_loss,lr,stopped_early\n";
  for (const auto& e : history.epochs) {
    out << e.stage << ',' << e.epoch << ',' << format_number(e.train_loss) << ','
        << format_number(e.train_l1) << ',' << format_number(e.train_tv) << ','
        << format_number(e.val_loss) << ',' << format_number(e.lr) << ','
        << (e.stopped_early ? 1 : 0) << '\n';
  }
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

}  // namespace mcforge
