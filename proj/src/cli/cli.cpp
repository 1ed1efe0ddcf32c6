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

#include "mcforge/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "mcforge/core/fft.hpp"
#include "mcforge/core/io.hpp"
#include "mcforge/metrics/evaluation.hpp"
#include "mcforge/network/checkpoint.hpp"
#include "mcforge/network/train.hpp"
#include "mcforge/simulator/corrupt.hpp"
#include "mcforge/simulator/dataset.hpp"
#include "mcforge/trajectory.hpp"

namespace mcforge::cli {
namespace {

namespace fs = std::filesystem;

struct EngineFlags {
  std::string engine = "gridding";
  double oversampling = 2.0;
  int half_width = 3;

  void add_to(CLI::App* app) {
    app->add_option("--engine", engine, "k-space evaluation engine")
        ->check(CLI::IsMember({"gridding", "direct"}));
    app->add_option("--oversampling", oversampling, "gridding oversampling factor (>= 1.25)");
    app->add_option("--half-width", half_width, "gridding kernel half-width in cells (>= 2)");
  }

  CorruptionOptions options() const {
    CorruptionOptions opt{parse_engine(engine), oversampling, half_width};
    validate(opt);
    return opt;
  }
};

std::array<double, 3> parse_fractions(const std::string& s) {
  std::array<double, 3> f{};
  std::stringstream ss(s);
  std::string part;
  std::size_t i = 0;
  while (std::getline(ss, part, ',')) {
    if (i >= 3) throw ConfigurationError("--split expects three comma-separated fractions");
    f[i++] = std::stod(part);
  }
  if (i != 3) throw ConfigurationError("--split expects three comma-separated fractions");
  return f;
}

std::string fmt(double v, int precision = 4) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

void print_summary(std::ostream& out, const std::string& label, const ColumnSummary& s) {
  out << label << " (n=" << s.count << ")\n";
  out << "  ssim_in  " << fmt(s.ssim_in.mean) << " +/- " << fmt(s.ssim_in.std) << '\n';
  out << "  psnr_in  " << fmt(s.psnr_in.mean, 2) << " +/- " << fmt(s.psnr_in.std, 2) << " dB\n";
  if (s.has_corrected) {
    out << "  ssim_out " << fmt(s.ssim_out.mean) << " +/- " << fmt(s.ssim_out.std) << '\n';
    out << "  psnr_out " << fmt(s.psnr_out.mean, 2) << " +/- " << fmt(s.psnr_out.std, 2)
        << " dB\n";
  }
}

void print_slopes(std::ostream& out, const SlopeSummary& slopes) {
  if (slopes.corrupted) {
    out << "slope_in  " << fmt(slopes.corrupted->slope, 5) << "  intercept_in  "
        << fmt(slopes.corrupted->intercept, 5) << '\n';
  }
  if (slopes.corrected) {
    out << "slope_out " << fmt(slopes.corrected->slope, 5) << "  intercept_out "
        << fmt(slopes.corrected->intercept, 5) << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mcforge: rigid-motion k-space simulation and learned artifact correction"};
  app.require_subcommand(1);

  // generate
  DatasetConfig gen;
  std::string gen_out, gen_split = "0.6,0.2,0.2", gen_phantom = "random_ellipses";
  EngineFlags gen_engine;
  auto* generate = app.add_subcommand("generate", "simulate a clean/corrupted dataset");
  generate->add_option("--out", gen_out, "output directory")->required();
  generate->add_option("--images", gen.n_images, "number of phantoms");
  generate->add_option("--trajectories", gen.n_trajectories, "number of motion trajectories");
  generate->add_option("--size", gen.size, "image side length");
  generate->add_option("--severity-min", gen.severity_min, "minimum severity (mm/deg)");
  generate->add_option("--severity-max", gen.severity_max, "maximum severity (mm/deg)");
  generate->add_option("--split", gen_split, "train,val,test fractions");
  generate->add_option("--pairs-per-image", gen.pairs_per_image, "trajectories applied per phantom");
  generate->add_option("--phantom", gen_phantom, "phantom kind")
      ->check(CLI::IsMember({"random_ellipses", "shepp_logan"}));
  generate->add_option("--seed", gen.seed, "run seed")->required();
  gen_engine.add_to(generate);

  // corrupt
  std::string cor_in, cor_traj, cor_out, cor_complex;
  EngineFlags cor_engine;
  auto* corrupt_cmd = app.add_subcommand("corrupt", "apply a trajectory file to one image");
  corrupt_cmd->add_option("--in", cor_in, "input image (.mcf or .pgm)")->required();
  corrupt_cmd->add_option("--traj", cor_traj, "trajectory text file")->required();
  corrupt_cmd->add_option("--out", cor_out, "output image (.mcf or .pgm)")->required();
  corrupt_cmd->add_option("--complex-out", cor_complex, "also save the complex image (MCF1)");
  cor_engine.add_to(corrupt_cmd);

  // train
  std::string tr_manifest, tr_out, tr_history, tr_variant = "u";
  NetSpec tr_spec;
  TrainConfig tr_cfg;
  auto* train = app.add_subcommand("train", "two-stage training on a manifest");
  train->add_option("--manifest", tr_manifest, "dataset manifest")->required();
  train->add_option("--out", tr_out, "checkpoint path")->required();
  train->add_option("--history", tr_history, "training history output");
  train->add_option("--depth", tr_spec.depth, "encoder-decoder depth");
  train->add_option("--base-channels", tr_spec.base_channels, "channels at the first level");
  train->add_option("--variant", tr_variant, "u or u+o")->check(CLI::IsMember({"u", "u+o"}));
  train->add_option("--alpha", tr_cfg.stage2_loss.alpha, "stage-2 L1 weight");
  train->add_option("--beta", tr_cfg.stage2_loss.beta, "stage-2 TV weight");
  train->add_option("--stage1-epochs", tr_cfg.stage1_epochs, "L1-only epochs");
  train->add_option("--stage2-epochs", tr_cfg.stage2_epochs, "L1+TV epochs");
  train->add_option("--batch", tr_cfg.batch_size, "batch size");
  train->add_option("--lr", tr_cfg.lr0, "initial learning rate");
  train->add_option("--decay", tr_cfg.decay, "per-epoch learning-rate decay");
  train->add_option("--patience", tr_cfg.patience, "early-stopping patience (epochs)");
  train->add_option("--seed", tr_cfg.seed, "run seed")->required();
  train->add_flag("--augment", tr_cfg.augment_flips, "random mirroring of training pairs");

  // evaluate
  std::string ev_manifest, ev_model, ev_corrected, ev_out, ev_split = "test";
  auto* evaluate = app.add_subcommand("evaluate", "SSIM/PSNR report and severity slopes");
  evaluate->add_option("--manifest", ev_manifest, "dataset manifest")->required();
  auto* ev_model_opt = evaluate->add_option("--model", ev_model, "checkpoint to apply");
  evaluate->add_option("--corrected", ev_corrected, "directory of <pair>.mcf corrected images")
      ->excludes(ev_model_opt);
  evaluate->add_option("--split", ev_split, "train, val, test or all")
      ->check(CLI::IsMember({"train", "val", "test", "all"}));
  evaluate->add_option("--out", ev_out, "metric report path");

  // infer
  std::string inf_model, inf_manifest, inf_out, inf_split = "test";
  std::vector<std::string> inf_inputs;
  bool inf_pgm = false;
  auto* infer = app.add_subcommand("infer", "run a trained model on images");
  infer->add_option("--model", inf_model, "checkpoint")->required();
  auto* inf_manifest_opt = infer->add_option("--manifest", inf_manifest, "dataset manifest");
  infer->add_option("--in", inf_inputs, "input images")->excludes(inf_manifest_opt);
  infer->add_option("--split", inf_split, "manifest split")
      ->check(CLI::IsMember({"train", "val", "test", "all"}));
  infer->add_option("--out", inf_out, "output directory")->required();
  infer->add_flag("--pgm", inf_pgm, "also write 8-bit graymaps");

  // report
  std::string rep_metrics, rep_out;
  auto* report = app.add_subcommand("report", "summary and per-severity-bin tables");
  report->add_option("--metrics", rep_metrics, "metric report from evaluate")->required();
  report->add_option("--out", rep_out, "write the table to a file as well");

  std::vector<const char*> argv{"mcforge"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (*generate) {
      gen.split_fractions = parse_fractions(gen_split);
      gen.phantom = parse_phantom_kind(gen_phantom);
      gen.corruption = gen_engine.options();
      const auto manifest = build_dataset(gen, gen_out);
      out << "wrote " << manifest.records.size() << " pairs to "
          << (fs::path(gen_out) / "manifest.csv").string() << '\n';
    } else if (*corrupt_cmd) {
      const auto img = load_any_image(cor_in);
      const auto traj = load_trajectory(cor_traj);
      const auto complex_img = corrupt_complex(img, traj, cor_engine.options());
      save_any_image(cor_out, magnitude(complex_img));
      if (!cor_complex.empty()) save_grid(cor_complex, complex_img);
      out << "severity " << fmt(traj.size() >= 2 ? severity(traj) : 0.0) << " mm/deg\n";
    } else if (*train) {
      tr_spec.variant = parse_variant(tr_variant);
      validate(tr_spec);
      validate(tr_cfg);
      const auto manifest = load_manifest(tr_manifest);
      TrainingData data{load_pairs(manifest, Split::Train), load_pairs(manifest, Split::Val)};
      const auto result = train_two_stage(data, tr_spec, tr_cfg);
      save_checkpoint(tr_out, result.params);
      if (!tr_history.empty()) save_history(tr_history, result.history);
      for (const auto& e : result.history.epochs) {
        out << "stage " << e.stage << " epoch " << e.epoch << " train " << fmt(e.train_loss)
            << " val " << fmt(e.val_loss) << " lr " << e.lr << (e.stopped_early ? " (stop)" : "")
            << '\n';
      }
    } else if (*evaluate) {
      const auto manifest = load_manifest(ev_manifest);
      Corrector corrector;
      NetParams params;
      if (!ev_model.empty()) {
        params = load_checkpoint(ev_model);
        corrector = [&params](const std::string&, const Image2D& img) {
          return forward(params, img);
        };
      } else if (!ev_corrected.empty()) {
        corrector = [dir = fs::path(ev_corrected)](const std::string& id, const Image2D&) {
          return load_image(dir / (id + ".mcf"));
        };
      }
      const std::optional<Split> split =
          ev_split == "all" ? std::nullopt : std::optional<Split>(parse_split(ev_split));
      const auto rep = evaluate_manifest(manifest, split, corrector);
      if (!ev_out.empty()) save_report(ev_out, rep.rows);
      print_summary(out, "split " + ev_split, rep.summary);
      print_slopes(out, severity_slopes(rep.rows));
    } else if (*infer) {
      const auto params = load_checkpoint(inf_model);
      std::vector<std::string> ids;
      std::vector<Image2D> images;
      if (!inf_manifest.empty()) {
        const auto manifest = load_manifest(inf_manifest);
        for (const auto& r : manifest.records) {
          if (inf_split != "all" && r.split != parse_split(inf_split)) continue;
          ids.push_back(r.pair_id);
          images.push_back(load_image(manifest.resolve(r.corrupted)));
        }
      } else {
        for (const auto& p : inf_inputs) {
          ids.push_back(fs::path(p).stem().string());
          images.push_back(load_any_image(p));
        }
      }
      if (images.empty()) throw ConfigurationError("infer: no input images");
      fs::create_directories(inf_out);
      const auto result = predict_batch(params, images);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        save_image(fs::path(inf_out) / (ids[i] + ".mcf"), result.outputs[i]);
        if (inf_pgm) save_pgm(fs::path(inf_out) / (ids[i] + ".pgm"), result.outputs[i]);
      }
      out << "processed " << images.size() << " images, "
          << fmt(result.seconds_per_image * 1000.0, 3) << " ms/image\n";
    } else if (*report) {
      const auto rows = load_report(rep_metrics);
      std::ostringstream table;
      print_summary(table, "all pairs", summarize(rows));
      print_slopes(table, severity_slopes(rows));
      table << "severity bin  n  ssim_in  ssim_out  psnr_in  psnr_out\n";
      for (const auto& b : summarize_by_severity(rows)) {
        table << b.bin.label << "  " << b.summary.count;
        if (b.summary.count == 0) {
          table << "  -  -  -  -\n";
          continue;
        }
        table << "  " << fmt(b.summary.ssim_in.mean) << "  "
              << (b.summary.has_corrected ? fmt(b.summary.ssim_out.mean) : "-") << "  "
              << fmt(b.summary.psnr_in.mean, 2) << "  "
              << (b.summary.has_corrected ? fmt(b.summary.psnr_out.mean, 2) : "-") << '\n';
      }
      out << table.str();
      if (!rep_out.empty()) {
        std::ofstream f(rep_out, std::ios::trunc);
        if (!f) throw IoError("cannot write " + rep_out);
        f << table.str();
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace mcforge::cli
