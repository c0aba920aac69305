// Copyright (c) 2026, The alphakit Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "alphakit/commands.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "alphakit/compose.hpp"
#include "alphakit/filters.hpp"
#include "alphakit/image_io.hpp"
#include "alphakit/log.hpp"
#include "alphakit/metrics.hpp"
#include "alphakit/report.hpp"
#include "alphakit/text_io.hpp"
#include "alphakit/trimap.hpp"
#include "alphakit/worker_pool.hpp"

namespace alphakit {

namespace fs = std::filesystem;

namespace {

// Residual bound for samples whose ground truth is kept.
constexpr double kKeepResidualTolerance = 1e-5;

template <typename Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

fs::path output_dir(const RunConfig& cfg) {
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  return dir;
}

void write_config_copy(const RunConfig& cfg) {
  write_text_file(output_dir(cfg) / "config.json", cfg.to_json());
}

std::uint64_t stem_hash(const std::string& stem) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : stem) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Background scaled to cover width x height, then its top-left corner.
RasterImage fit_background(const RasterImage& bg, int width, int height) {
  const double cover = std::max(static_cast<double>(width) / bg.width(),
                                static_cast<double>(height) / bg.height());
  RasterImage scaled = bg;
  if (cover > 1.0) {
    scaled = resize_bilinear(bg, std::max(width, static_cast<int>(std::ceil(bg.width() * cover))),
                             std::max(height, static_cast<int>(std::ceil(bg.height() * cover))));
  }
  return crop(scaled, 0, 0, width, height);
}

std::string mean_line(const MetricReport& m, std::size_t images) {
  return "MEAN sad=" + format_optional(m.sad) + " mse=" + format_optional(m.mse) +
         " grad=" + format_optional(m.grad) + " conn=" + format_optional(m.conn) +
         " images=" + std::to_string(images);
}

std::size_t evaluated_count(const SetEvaluation& ev) {
  std::size_t n = 0;
  for (const ImageEvaluation& img : ev.images) n += img.report ? 1 : 0;
  return n;
}

// Reports unmatched stems and per-image failures. Returns false when they
// should abort the run.
bool check_partial(const SetEvaluation& ev, bool allow_partial, const std::string& context,
                   std::ostream& err) {
  std::vector<std::string> problems;
  for (const std::string& stem : ev.missing) {
    problems.push_back(stem + ": missing prediction, ground truth or trimap");
  }
  for (const ImageEvaluation& img : ev.images) {
    if (!img.report) problems.push_back(img.image_id + ": " + img.error);
  }
  if (problems.empty()) return true;
  err << (allow_partial ? "warning: " : "error: ") << context << ": " << problems.size()
      << " image(s) not evaluated\n";
  for (const std::string& p : problems) err << "  " << p << "\n";
  return allow_partial;
}

fs::path require_dir(const std::optional<fs::path>& flag, const std::string& configured,
                     const char* what) {
  fs::path dir = flag ? *flag : fs::path(configured);
  if (dir.empty()) throw InputError(std::string("no ") + what + " directory given");
  if (!fs::is_directory(dir)) {
    throw InputError(std::string(what) + " directory not found: '" + dir.string() + "'");
  }
  return dir;
}

}  // namespace

RunConfig resolve_config(const CommonOptions& common, const EnvLookup& env) {
  RunConfig cfg = load_config(common.config, env);
  if (common.seed) cfg.seed = *common.seed;
  if (common.workers) cfg.workers = *common.workers;
  if (common.out) cfg.output_dir = *common.out;
  cfg.validate();
  return cfg;
}

int cmd_compose(const CommonOptions& common, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve_config(common);
    std::map<Split, SplitSources> sources;
    for (const auto& [split, paths] :
         {std::pair{Split::kTrain, cfg.paths.train}, std::pair{Split::kTest, cfg.paths.test}}) {
      if (!paths.configured()) continue;
      sources[split] = {paths.fg_dir, paths.alpha_dir, paths.bg_dir};
    }
    if (sources.empty()) {
      throw InputError("no dataset directories configured (paths.train / paths.test)");
    }
    const Manifest manifest = build_manifest(sources, cfg.rules, cfg.seed);
    const fs::path dir = output_dir(cfg);
    const fs::path manifest_path = cfg.manifest_path();
    if (manifest_path.has_parent_path()) fs::create_directories(manifest_path.parent_path());
    manifest.save(manifest_path);
    write_config_copy(cfg);

    SourceCache cache;
    std::map<Split, std::size_t> counts;
    ordered_parallel_map<int>(
        manifest.entries.size(), cfg.workers,
        [&](std::size_t i) {
          const ManifestEntry& e = manifest.entries[i];
          const auto fg = cache.image(e.fg_path);
          const auto alpha = cache.alpha(e.alpha_path);
          require_same_shape(*fg, *alpha, ("foreground/alpha of '" + e.id + "'").c_str());
          const RasterImage bg = fit_background(read_image(e.bg_path), fg->width(), fg->height());
          Rng rng(e.seed);
          const Trimap tri = generate_trimap(*alpha, rng, cfg.pipeline.train_min_radius,
                                             cfg.pipeline.train_max_radius);
          const fs::path split_dir = dir / "composed" / std::string(to_string(e.split));
          fs::create_directories(split_dir);
          write_image_png(split_dir / (e.id + "_img.png"), composite(*fg, bg, *alpha));
          write_alpha_png(split_dir / (e.id + "_alpha.png"), *alpha, 16);
          write_trimap_png(split_dir / (e.id + "_trimap.png"), tri);
          return 0;
        },
        [&](std::size_t i, int&&) { ++counts[manifest.entries[i].split]; });

    out << "manifest: " << manifest_path.string() << " (" << manifest.entries.size()
        << " entries)\n";
    for (const auto& [split, n] : counts) {
      out << to_string(split) << ": " << n << " composed\n";
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_augment(const CommonOptions& common, const AugmentOptions& options, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = resolve_config(common);
    if (options.policy) cfg.policy = load_policy(*options.policy, cfg.policy);
    if (options.count) cfg.augment_count = *options.count;
    const fs::path manifest_path = cfg.manifest_path();
    if (!fs::is_regular_file(manifest_path)) {
      throw InputError("manifest not found: '" + manifest_path.string() +
                       "' (run compose first)");
    }
    const Manifest manifest = Manifest::load(manifest_path);
    const fs::path dir = output_dir(cfg);
    const fs::path patch_dir = dir / "patches";
    fs::create_directories(patch_dir);
    write_config_copy(cfg);

    EmitOptions emit;
    emit.seed = cfg.seed;
    emit.count = cfg.augment_count;
    emit.workers = cfg.workers;
    emit.policy = cfg.policy;
    emit.pipeline = cfg.pipeline;

    std::string records;
    std::size_t audited = 0;
    std::size_t not_reduced = 0;
    std::vector<std::string> audit_failures;
    const EmitSummary summary = emit_batch(manifest, emit, [&](TrainingPatch&& p) {
      write_patch(patch_dir, p);
      records += p.record.to_json_line() + "\n";
      if (!options.audit) return;
      ++audited;
      const AugmentationRecord& r = p.record;
      const double residual = composition_residual(p.image, p.fg, p.bg, p.alpha);
      std::string failure;
      if (residual != r.residual) failure = "recorded residual differs from recomputed";
      if (r.gt_action == GtAction::kKeep && residual > kKeepResidualTolerance) {
        failure = "residual " + format_number(residual) + " above tolerance";
      }
      if (r.gt_action == GtAction::kModifyAlpha) {
        if (!r.residual_unmodified_gt) {
          failure = "missing unmodified-alpha residual";
        } else if (!(residual < *r.residual_unmodified_gt)) {
          // Expected on textured F/B: the maximum sits where alpha is flat.
          ++not_reduced;
        }
      }
      for (float a : p.alpha.values()) {
        if (!(a >= 0.0f && a <= 1.0f)) failure = "alpha outside [0,1]";
      }
      if (!failure.empty()) {
        audit_failures.push_back(std::to_string(p.index) + ": " + failure);
      }
    });
    write_text_file(patch_dir / "records.jsonl", records);

    out << "strategy,count,frequency\n";
    for (Strategy s : {Strategy::kAF, Strategy::kAFB, Strategy::kAC, Strategy::kNone}) {
      const std::size_t n = summary.strategy_counts.at(s);
      const double f = summary.emitted ? static_cast<double>(n) / summary.emitted : 0.0;
      std::ostringstream freq;
      freq << std::fixed << std::setprecision(4) << f;
      out << to_string(s) << "," << n << "," << freq.str() << "\n";
    }
    out << "emitted " << summary.emitted << " of " << summary.requested << " (skipped "
        << summary.skipped << ")\n";
    if (options.audit) {
      out << "audit: " << audited << " checked, " << audit_failures.size() << " failed\n";
      if (not_reduced > 0) {
        out << "audit: " << not_reduced
            << " modified-alpha sample(s) without a lower max residual\n";
      }
      for (const std::string& f : audit_failures) err << "audit failure: " << f << "\n";
      if (!audit_failures.empty()) return static_cast<int>(kExitInternalError);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_eval(const CommonOptions& common, const EvalOptions& options, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve_config(common);
    std::string pred_configured;
    if (cfg.paths.pred_dirs.size() == 1) pred_configured = cfg.paths.pred_dirs.begin()->second;
    const fs::path pred = require_dir(options.pred_dir, pred_configured, "prediction");
    const fs::path gt = require_dir(options.gt_dir, cfg.paths.gt_dir, "ground-truth");
    const fs::path tri = require_dir(options.trimap_dir, cfg.paths.trimap_dir, "trimap");
    const SetEvaluation ev = evaluate_set(pred, gt, tri, cfg.metrics, cfg.workers);
    if (!check_partial(ev, common.allow_partial, "eval", err)) {
      return static_cast<int>(kExitInputError);
    }
    const std::size_t n = evaluated_count(ev);
    if (n == 0) throw InputError("no images could be evaluated");
    const fs::path csv = options.csv ? *options.csv : output_dir(cfg) / "eval.csv";
    if (csv.has_parent_path()) fs::create_directories(csv.parent_path());
    write_text_file(csv, report_csv(ev));
    write_config_copy(cfg);
    out << mean_line(ev.mean, n) << "\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_sweep(const CommonOptions& common, const SweepOptions& options, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve_config(common);
    const fs::path gt = require_dir(options.gt_dir, cfg.paths.gt_dir, "ground-truth");
    const std::string alpha_configured =
        cfg.paths.alpha_dir.empty() ? gt.string() : cfg.paths.alpha_dir;
    const fs::path alpha_dir = require_dir(options.alpha_dir, alpha_configured, "alpha");
    std::map<std::string, fs::path> preds;
    for (const auto& [name, dir] : cfg.paths.pred_dirs) preds[name] = dir;
    for (const auto& [name, dir] : options.pred_dirs) preds[name] = dir;
    if (preds.empty()) throw InputError("no prediction directories given");
    for (const auto& [name, dir] : preds) {
      if (!fs::is_directory(dir)) {
        throw InputError("prediction directory of '" + name + "' not found: '" + dir.string() +
                         "'");
      }
    }

    const fs::path sweep_dir = output_dir(cfg) / "sweep";
    fs::create_directories(sweep_dir);
    write_config_copy(cfg);
    const auto alphas = list_images(alpha_dir);
    if (alphas.empty()) throw InputError("no mattes in '" + alpha_dir.string() + "'");
    for (const SweepRange& r : cfg.sweep) fs::create_directories(sweep_dir / "trimaps" / r.label);

    std::string manifest_csv = "image_id,set_label,drawn_d,path\n";
    ordered_parallel_map<std::vector<SweepTrimap>>(
        alphas.size(), cfg.workers,
        [&](std::size_t i) {
          const auto& [stem, path] = alphas[i];
          const AlphaMatte alpha = read_alpha(path);
          Rng rng(derive_seed(cfg.seed, stem_hash(stem)));
          auto sets = sweep_sets(alpha, rng, cfg.sweep);
          for (const SweepTrimap& s : sets) {
            write_trimap_png(sweep_dir / "trimaps" / s.label / (stem + ".png"), s.trimap);
          }
          return sets;
        },
        [&](std::size_t i, std::vector<SweepTrimap>&& sets) {
          const std::string& stem = alphas[i].first;
          for (const SweepTrimap& s : sets) {
            const fs::path p = sweep_dir / "trimaps" / s.label / (stem + ".png");
            manifest_csv += csv_escape(stem) + "," + csv_escape(s.label) + "," +
                            std::to_string(s.radius) + "," + csv_escape(p.generic_string()) +
                            "\n";
          }
        });
    write_text_file(sweep_dir / "sweep_manifest.csv", manifest_csv);

    std::vector<CurvePoint> points;
    for (const auto& [method, pred_dir] : preds) {
      std::map<std::string, MetricReport> means;
      for (const SweepRange& r : cfg.sweep) {
        const SetEvaluation ev =
            evaluate_set(pred_dir, gt, sweep_dir / "trimaps" / r.label, cfg.metrics, cfg.workers);
        if (!check_partial(ev, common.allow_partial, method + "/" + r.label, err)) {
          return static_cast<int>(kExitInputError);
        }
        if (evaluated_count(ev) == 0) {
          throw InputError("method '" + method + "': no images could be evaluated");
        }
        fs::create_directories(sweep_dir / method);
        write_text_file(sweep_dir / method / (r.label + ".csv"), report_csv(ev));
        means[r.label] = ev.mean;
      }
      for (const std::string& metric : metric_names()) {
        for (const SweepRange& r : cfg.sweep) {
          const MetricReport& m = means.at(r.label);
          const std::optional<double> v = metric == "sad"    ? m.sad
                                          : metric == "mse"  ? m.mse
                                          : metric == "grad" ? m.grad
                                                             : m.conn;
          points.push_back({method, r.label, metric, v});
        }
      }
    }
    write_text_file(sweep_dir / "sweep.csv", curves_csv(points));
    std::vector<std::string> labels;
    for (const SweepRange& r : cfg.sweep) labels.push_back(r.label);
    for (const std::string& metric : metric_names()) {
      try {
        write_curve_plot(sweep_dir / ("plot_" + metric + ".png"), points, metric, labels);
      } catch (const std::exception& e) {
        err << "warning: plot for " << metric << " not written: " << e.what() << "\n";
      }
    }
    out << "sweep: " << preds.size() << " method(s) x " << cfg.sweep.size() << " sets over "
        << alphas.size() << " image(s) -> " << (sweep_dir / "sweep.csv").string() << "\n";
    for (const CurvePoint& p : points) {
      if (p.metric == "sad") {
        out << p.method << " set " << p.set_label << " sad=" << format_optional(p.value) << "\n";
      }
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_report(const CommonOptions& common, const ReportOptions& options, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve_config(common);
    if (options.evals.empty() && options.sweeps.empty()) {
      throw InputError("report needs at least one --eval or --sweep input");
    }
    const fs::path dir = output_dir(cfg);
    if (!options.evals.empty()) {
      std::vector<fs::path> paths;
      std::vector<std::string> labels;
      for (const auto& [label, path] : options.evals) {
        labels.push_back(label);
        paths.push_back(path);
      }
      const ComparisonTable table = merge_reports(paths, labels);
      write_text_file(dir / "table.md", table.to_markdown());
      write_text_file(dir / "table.csv", table.to_csv());
      out << table.to_markdown();
    }
    if (!options.sweeps.empty()) {
      std::vector<std::string> labels;
      for (const SweepRange& r : cfg.sweep) labels.push_back(r.label);
      const auto points = robustness_table(options.sweeps, labels);
      write_text_file(dir / "curves.csv", curves_csv(points));
      out << "curves: " << points.size() << " rows\n";
    }
    write_config_copy(cfg);
    return static_cast<int>(kExitOk);
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"alphakit: matting data pipeline, augmentation and evaluation"};
  app.require_subcommand(1);
  CommonOptions common;
  std::string config;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_dir;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Run config (JSON)");
    sub->add_option("--seed", seed, "Global seed");
    sub->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_flag("--allow-partial", common.allow_partial,
                  "Evaluate what can be evaluated and warn about the rest");
  };

  CLI::App* compose = app.add_subcommand("compose", "Build the manifest and composited sets");
  add_common(compose);

  AugmentOptions aug;
  std::size_t count = 0;
  std::string policy;
  CLI::App* augment = app.add_subcommand("augment", "Emit augmented training patches");
  add_common(augment);
  augment->add_option("-n,--count", count, "Number of samples");
  augment->add_option("--policy", policy, "SA policy override file (JSON)");
  augment->add_flag("--audit", aug.audit, "Re-check composition residuals of emitted patches");

  EvalOptions ev;
  std::string pred, gt, tri, csv;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate predictions against ground truth");
  add_common(eval);
  eval->add_option("--pred", pred, "Prediction directory");
  eval->add_option("--gt", gt, "Ground-truth alpha directory");
  eval->add_option("--trimap", tri, "Trimap directory");
  eval->add_option("--csv", csv, "Output CSV (default <out>/eval.csv)");

  SweepOptions sw;
  std::vector<std::string> sweep_preds;
  std::string sweep_gt, sweep_alpha;
  CLI::App* sweep = app.add_subcommand("sweep", "Trimap-precision robustness sweep");
  add_common(sweep);
  sweep->add_option("--pred", sweep_preds, "method=DIR, repeatable");
  sweep->add_option("--gt", sweep_gt, "Ground-truth alpha directory");
  sweep->add_option("--alpha", sweep_alpha, "Mattes for trimap synthesis (default --gt)");

  ReportOptions rep;
  std::vector<std::string> report_evals;
  std::vector<std::string> report_sweeps;
  CLI::App* report = app.add_subcommand("report", "Comparison tables and curve data");
  add_common(report);
  report->add_option("--eval", report_evals, "label=CSV, repeatable");
  report->add_option("--sweep", report_sweeps, "Sweep CSV, repeatable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    CLI::App* failed = &app;
    for (CLI::App* sub : app.get_subcommands()) failed = sub;
    err << "error: " << e.what() << "\n";
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      out << failed->help();
      return kExitOk;
    }
    return kExitInputError;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (!config.empty()) common.config = config;
  if (sub->count("--seed")) common.seed = seed;
  if (sub->count("--workers")) common.workers = workers;
  if (!out_dir.empty()) common.out = out_dir;

  auto split_pair = [&](const std::string& text, const char* flag,
                        std::pair<std::string, std::string>& kv) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
      err << "error: " << flag << " expects NAME=PATH, got '" << text << "'\n";
      return false;
    }
    kv = {text.substr(0, eq), text.substr(eq + 1)};
    return true;
  };

  if (sub == compose) return cmd_compose(common, out, err);
  if (sub == augment) {
    if (augment->count("--count")) aug.count = count;
    if (!policy.empty()) aug.policy = policy;
    return cmd_augment(common, aug, out, err);
  }
  if (sub == eval) {
    if (!pred.empty()) ev.pred_dir = pred;
    if (!gt.empty()) ev.gt_dir = gt;
    if (!tri.empty()) ev.trimap_dir = tri;
    if (!csv.empty()) ev.csv = csv;
    return cmd_eval(common, ev, out, err);
  }
  if (sub == sweep) {
    for (const std::string& p : sweep_preds) {
      std::pair<std::string, std::string> kv;
      if (!split_pair(p, "--pred", kv)) return kExitInputError;
      sw.pred_dirs[kv.first] = kv.second;
    }
    if (!sweep_gt.empty()) sw.gt_dir = sweep_gt;
    if (!sweep_alpha.empty()) sw.alpha_dir = sweep_alpha;
    return cmd_sweep(common, sw, out, err);
  }
  for (const std::string& e : report_evals) {
    std::pair<std::string, std::string> kv;
    if (!split_pair(e, "--eval", kv)) return kExitInputError;
    rep.evals.emplace_back(kv.first, kv.second);
  }
  for (const std::string& s : report_sweeps) rep.sweeps.emplace_back(s);
  return cmd_report(common, rep, out, err);
}

}  // namespace alphakit
