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

#include "mcforge/metrics/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "mcforge/core/io.hpp"

namespace mcforge {
namespace {

constexpr const char* kReportHeader = "pair,severity,ssim_in,ssim_out,psnr_in,psnr_out";

std::optional<double> parse_field(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

std::string optional_field(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

bool in_bin(const SeverityBin& b, double s) {
  const bool above = b.lo_inclusive ? s >= b.lo : s > b.lo;
  return above && s <= b.hi;
}

}  // namespace

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

EvaluationReport evaluate_manifest(const Manifest& manifest, std::optional<Split> split,
                                   const Corrector& corrector, const SsimConfig& cfg) {
  std::vector<const ManifestRecord*> selected;
  for (const auto& r : manifest.records) {
    if (!split || r.split == *split) selected.push_back(&r);
  }
  EvaluationReport report;
  report.rows.resize(selected.size());
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const auto& rec = *selected[i];
    Image2D clean, corrupted;
    try {
      clean = load_image(manifest.resolve(rec.clean));
      corrupted = load_image(manifest.resolve(rec.corrupted));
    } catch (const Error& e) {
      throw IoError("pair " + rec.pair_id + ": " + e.what());
    }
    MetricRow& row = report.rows[i];
    row.pair_id = rec.pair_id;
    row.severity = rec.severity;
    row.ssim_corrupted = ssim(corrupted, clean, cfg);
    row.psnr_corrupted = psnr(corrupted, clean);
    if (corrector) {
      const auto corrected = corrector(rec.pair_id, corrupted);
      row.ssim_corrected = ssim(corrected, clean, cfg);
      row.psnr_corrected = psnr(corrected, clean);
    }
  }
  report.summary = summarize(report.rows);
  return report;
}

ColumnSummary summarize(const std::vector<MetricRow>& rows) {
  ColumnSummary s;
  s.count = rows.size();
  std::vector<double> si, so, pi, po;
  for (const auto& r : rows) {
    si.push_back(r.ssim_corrupted);
    pi.push_back(r.psnr_corrupted);
    if (r.ssim_corrected) so.push_back(*r.ssim_corrected);
    if (r.psnr_corrected) po.push_back(*r.psnr_corrected);
  }
  s.ssim_in = mean_std(si);
  s.psnr_in = mean_std(pi);
  s.has_corrected = !rows.empty() && so.size() == rows.size();
  if (s.has_corrected) {
    s.ssim_out = mean_std(so);
    s.psnr_out = mean_std(po);
  }
  return s;
}

SlopeSummary severity_slopes(const std::vector<MetricRow>& rows) {
  SlopeSummary out;
  std::vector<double> xs, yin, yout;
  for (const auto& r : rows) {
    xs.push_back(r.severity);
    yin.push_back(r.ssim_corrupted);
    if (r.ssim_corrected) yout.push_back(*r.ssim_corrected);
  }
  try {
    out.corrupted = fit_line(xs, yin);
    if (yout.size() == xs.size()) out.corrected = fit_line(xs, yout);
  } catch (const SingularFitError&) {
  }
  return out;
}

void save_report(const std::filesystem::path& path, const std::vector<MetricRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write report " + path.string());
  }
  out << kReportHeader << '\n';
  for (const auto& r : rows) {
    out << r.pair_id << ',' << format_number(r.severity) << ',' << format_number(r.ssim_corrupted)
        << ',' << optional_field(r.ssim_corrected) << ',' << format_number(r.psnr_corrupted) << ','
        << optional_field(r.psnr_corrected) << '\n';
  }
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

std::vector<MetricRow> load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open report " + path.string());
  }
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader) {
    throw IoError(path.string() + ": missing or unexpected report header");
  }
  std::vector<MetricRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (f.size() != 6) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 6 fields");
    }
    try {
      MetricRow r;
      r.pair_id = f[0];
      r.severity = parse_field(f[1]).value();
      r.ssim_corrupted = parse_field(f[2]).value();
      r.ssim_corrected = parse_field(f[3]);
      r.psnr_corrupted = parse_field(f[4]).value();
      r.psnr_corrected = parse_field(f[5]);
      rows.push_back(std::move(r));
    } catch (const std::exception&) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

const std::vector<SeverityBin>& severity_bins() {
  static const std::vector<SeverityBin> bins = {
      {"[0,5]", 0.0, 5.0, true},
      {"(5,10]", 5.0, 10.0, false},
      {"(10,15]", 10.0, 15.0, false},
      {"(15,inf)", 15.0, std::numeric_limits<double>::infinity(), false},
  };
  return bins;
}

std::vector<BinSummary> summarize_by_severity(const std::vector<MetricRow>& rows) {
  std::vector<BinSummary> out;
  for (const auto& b : severity_bins()) {
    std::vector<MetricRow> members;
    for (const auto& r : rows) {
      if (in_bin(b, r.severity)) members.push_back(r);
    }
    out.push_back({b, summarize(members)});
  }
  return out;
}

}  // namespace mcforge
