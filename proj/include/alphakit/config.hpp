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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alphakit/dataset.hpp"
#include "alphakit/metrics.hpp"
#include "alphakit/strategy.hpp"
#include "alphakit/trimap.hpp"

namespace alphakit {

/// Every setting of a CLI run.
///
/// Stored as JSON. Any scalar key can be overridden from the environment as
/// ALPHAKIT_<PATH>, where PATH is the upper-cased key path joined with
/// underscores (e.g. ALPHAKIT_POLICY_P_AF, ALPHAKIT_PATHS_TRAIN_BG_DIR).
struct RunConfig {
  std::uint64_t seed = 0;
  int workers = 1;
  std::string output_dir = "out";

  struct SplitPaths {
    std::string fg_dir;
    std::string alpha_dir;
    std::string bg_dir;
    bool configured() const { return !fg_dir.empty() || !alpha_dir.empty() || !bg_dir.empty(); }
  };
  struct Paths {
    SplitPaths train;
    SplitPaths test;
    std::string manifest;  // default: <output_dir>/manifest.json
    std::string gt_dir;
    std::string alpha_dir;  // mattes used to synthesise sweep trimaps; default gt_dir
    std::string trimap_dir;
    std::map<std::string, std::string> pred_dirs;  // method -> prediction dir
  } paths;

  ManifestRules rules;
  PipelineConfig pipeline;
  SaPolicy policy;
  std::vector<SweepRange> sweep = default_sweep_ranges();
  MetricConstants metrics;
  std::size_t augment_count = 100;

  /// Throws InputError naming the first bad field.
  void validate() const;

  std::filesystem::path manifest_path() const;

  std::string to_json() const;
  /// Values in `text` override the defaults; unknown keys are rejected.
  static RunConfig from_json(std::string_view text);
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
std::optional<std::string> process_env(const std::string& name);

/// Loads a config file (or defaults when `path` is empty), then applies
/// environment overrides.
RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      const EnvLookup& env = process_env);

/// Applies environment overrides to a config held as JSON text.
std::string apply_env_overrides(std::string_view json_text, const EnvLookup& env);

/// SA policy from a standalone JSON object with the same keys as the
/// "policy" section, layered over `base`.
SaPolicy load_policy(const std::filesystem::path& path, const SaPolicy& base);

}  // namespace alphakit
