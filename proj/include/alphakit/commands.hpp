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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "alphakit/config.hpp"

namespace alphakit {

/// Process exit codes of every command.
enum ExitCode : int { kExitOk = 0, kExitInputError = 1, kExitInternalError = 2 };

/// Flags shared by all commands; set values override the config file and
/// the environment.
struct CommonOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
  bool allow_partial = false;
};

/// Config file, then ALPHAKIT_* environment, then flags.
RunConfig resolve_config(const CommonOptions& common, const EnvLookup& env = process_env);

struct AugmentOptions {
  std::optional<std::size_t> count;
  std::optional<std::filesystem::path> policy;
  bool audit = false;
};

struct EvalOptions {
  std::optional<std::filesystem::path> pred_dir;
  std::optional<std::filesystem::path> gt_dir;
  std::optional<std::filesystem::path> trimap_dir;
  std::optional<std::filesystem::path> csv;  // default <out>/eval.csv
};

struct SweepOptions {
  std::map<std::string, std::filesystem::path> pred_dirs;  // method -> dir
  std::optional<std::filesystem::path> gt_dir;
  std::optional<std::filesystem::path> alpha_dir;
};

struct ReportOptions {
  std::vector<std::pair<std::string, std::filesystem::path>> evals;  // label, eval CSV
  std::vector<std::filesystem::path> sweeps;
};

/// Builds the manifest and writes the composited sets:
/// <out>/manifest.json, <out>/composed/{split}/{id}_{img|alpha|trimap}.png.
int cmd_compose(const CommonOptions& common, std::ostream& out, std::ostream& err);

/// Emits training patches to <out>/patches/{split}/ with
/// <out>/patches/records.jsonl and prints the strategy frequencies.
int cmd_augment(const CommonOptions& common, const AugmentOptions& options, std::ostream& out,
                std::ostream& err);

/// Per-image metrics CSV plus MEAN row; the MEAN row is echoed to `out`.
int cmd_eval(const CommonOptions& common, const EvalOptions& options, std::ostream& out,
             std::ostream& err);

/// Trimap-precision sweep: synthesises the sweep trimaps from the GT mattes,
/// evaluates every method on each set and writes <out>/sweep/sweep.csv,
/// <out>/sweep/sweep_manifest.csv and one plot per metric.
int cmd_sweep(const CommonOptions& common, const SweepOptions& options, std::ostream& out,
              std::ostream& err);

/// Writes <out>/table.md, <out>/table.csv and, given sweep CSVs,
/// <out>/curves.csv.
int cmd_report(const CommonOptions& common, const ReportOptions& options, std::ostream& out,
               std::ostream& err);

/// Command-line front end ("alphakit <command> [flags]").
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace alphakit
