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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mcforge/metrics/metrics.hpp"
#include "mcforge/simulator/dataset.hpp"

namespace mcforge {

struct MetricRow {
  std::string pair_id;
  double severity = 0.0;
  double ssim_corrupted = 0.0;
  std::optional<double> ssim_corrected;
  double psnr_corrupted = 0.0;
  std::optional<double> psnr_corrected;
};

struct ColumnSummary {
  MeanStd ssim_in, ssim_out, psnr_in, psnr_out;
  bool has_corrected = false;
  std::size_t count = 0;
};

struct EvaluationReport {
  std::vector<MetricRow> rows;
  ColumnSummary summary;
};

/// Produces the corrected image for a corrupted input. `pair_id` lets a
/// corrector look up precomputed outputs.
using Corrector = std::function<Image2D(const std::string& pair_id, const Image2D& corrupted)>;

/// Rows in manifest order for records of `split` (all records if nullopt).
/// Without a corrector only the corrupted-vs-clean columns are filled.
EvaluationReport evaluate_manifest(const Manifest& manifest, std::optional<Split> split,
                                   const Corrector& corrector = {}, const SsimConfig& cfg = {});

ColumnSummary summarize(const std::vector<MetricRow>& rows);

struct SlopeSummary {
  std::optional<LineFit> corrupted;
  std::optional<LineFit> corrected;
};

/// SSIM-vs-severity regressions; a fit is absent when it would be singular.
SlopeSummary severity_slopes(const std::vector<MetricRow>& rows);

// Report file: header "pair,severity,ssim_in,ssim_out,psnr_in,psnr_out";
// +infinity is written as "inf", unfilled columns as empty fields.
void save_report(const std::filesystem::path& path, const std::vector<MetricRow>& rows);
std::vector<MetricRow> load_report(const std::filesystem::path& path);

struct SeverityBin {
  std::string label;
  double lo;
  double hi;
  bool lo_inclusive;
};

/// [0,5], (5,10], (10,15] mm/deg, plus an open-ended (15,inf) overflow bin.
const std::vector<SeverityBin>& severity_bins();

struct BinSummary {
  SeverityBin bin;
  ColumnSummary summary;
};

std::vector<BinSummary> summarize_by_severity(const std::vector<MetricRow>& rows);

std::string format_number(double v);

}  // namespace mcforge
