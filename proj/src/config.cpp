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

#include "alphakit/config.hpp"

#include <cctype>
#include <cstdlib>
#include <set>

#include "alphakit/text_io.hpp"
#include "json.hpp"

namespace alphakit {

using nlohmann::ordered_json;

namespace {

std::string_view to_string(AcRegionGt v) {
  return v == AcRegionGt::kModifyAlpha ? "modify_alpha" : "pseudo_label";
}
std::string_view to_string(AcLinearGt v) { return v == AcLinearGt::kKeep ? "keep" : "pseudo_label"; }
std::string_view to_string(MetricRegion v) {
  return v == MetricRegion::kUnknown ? "unknown" : "whole_image";
}

ordered_json probs_json(const CategoryProbs& p) {
  return {{"linear", p.linear}, {"nonlinear", p.nonlinear}, {"region", p.region}};
}

CategoryProbs probs_from(const ordered_json& j) {
  return {j.at("linear").get<double>(), j.at("nonlinear").get<double>(),
          j.at("region").get<double>()};
}

ordered_json policy_json(const SaPolicy& p) {
  ordered_json ranges;
  for (const auto& [category, kinds] : registry()) {
    for (OpKind kind : kinds) {
      const ParamRange r = p.ranges.get(kind);
      ranges[std::string(to_string(kind))] = {r.lo, r.hi};
    }
  }
  return {{"p_af", p.p_af},
          {"p_afb", p.p_afb},
          {"p_ac_given_neither", p.p_ac_given_neither},
          {"category_probs_af_afb", probs_json(p.category_probs_af_afb)},
          {"category_probs_ac", probs_json(p.category_probs_ac)},
          {"ac_region_gt", std::string(to_string(p.ac_region_gt))},
          {"ac_linear_gt", std::string(to_string(p.ac_linear_gt))},
          {"ranges", std::move(ranges)}};
}

SaPolicy policy_from(const ordered_json& j) {
  SaPolicy p;
  p.p_af = j.at("p_af").get<double>();
  p.p_afb = j.at("p_afb").get<double>();
  p.p_ac_given_neither = j.at("p_ac_given_neither").get<double>();
  p.category_probs_af_afb = probs_from(j.at("category_probs_af_afb"));
  p.category_probs_ac = probs_from(j.at("category_probs_ac"));
  const std::string region = j.at("ac_region_gt").get<std::string>();
  if (region == "modify_alpha") {
    p.ac_region_gt = AcRegionGt::kModifyAlpha;
  } else if (region == "pseudo_label") {
    p.ac_region_gt = AcRegionGt::kPseudoLabel;
  } else {
    throw InputError("policy.ac_region_gt must be modify_alpha or pseudo_label");
  }
  const std::string linear = j.at("ac_linear_gt").get<std::string>();
  if (linear == "keep") {
    p.ac_linear_gt = AcLinearGt::kKeep;
  } else if (linear == "pseudo_label") {
    p.ac_linear_gt = AcLinearGt::kPseudoLabel;
  } else {
    throw InputError("policy.ac_linear_gt must be keep or pseudo_label");
  }
  for (const auto& [name, value] : j.at("ranges").items()) {
    const auto kind = op_kind_from_string(name);
    if (!kind) throw InputError("policy.ranges: unknown op '" + name + "'");
    if (!value.is_array() || value.size() != 2) {
      throw InputError("policy.ranges." + name + " must be [lo, hi]");
    }
    const ParamRange r{value[0].get<double>(), value[1].get<double>()};
    if (!(r.lo <= r.hi)) throw InputError("policy.ranges." + name + ": lo > hi");
    if (!(r == default_range(*kind))) p.ranges.overrides[*kind] = r;
  }
  return p;
}

ordered_json split_json(const RunConfig::SplitPaths& s) {
  return {{"fg_dir", s.fg_dir}, {"alpha_dir", s.alpha_dir}, {"bg_dir", s.bg_dir}};
}

RunConfig::SplitPaths split_from(const ordered_json& j) {
  return {j.at("fg_dir").get<std::string>(), j.at("alpha_dir").get<std::string>(),
          j.at("bg_dir").get<std::string>()};
}

ordered_json parse_object(std::string_view text, const std::string& what) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(what + ": " + e.what());
  }
}

// Keys whose children are free-form names rather than schema fields.
bool is_open_map(const std::string& path) { return path == "paths.pred_dirs"; }

bool same_kind(const ordered_json& a, const ordered_json& b) {
  if (a.is_number() && b.is_number()) return true;
  return a.type() == b.type();
}

void merge_into(ordered_json& target, const ordered_json& patch, const std::string& path) {
  if (!patch.is_object()) {
    throw InputError("config: '" + (path.empty() ? std::string("<root>") : path) +
                     "' must be an object");
  }
  for (const auto& [key, value] : patch.items()) {
    const std::string child = path.empty() ? key : path + "." + key;
    if (is_open_map(path)) {
      if (!value.is_string()) throw InputError("config: '" + child + "' must be a string");
      target[key] = value;
      continue;
    }
    if (!target.contains(key)) throw InputError("config: unknown key '" + child + "'");
    ordered_json& slot = target[key];
    if (slot.is_object() && !is_open_map(child)) {
      merge_into(slot, value, child);
    } else if (is_open_map(child)) {
      if (!value.is_object()) throw InputError("config: '" + child + "' must be an object");
      slot = ordered_json::object();
      merge_into(slot, value, child);
    } else {
      if (!same_kind(slot, value)) {
        throw InputError("config: '" + child + "' has the wrong type (expected " +
                         std::string(slot.type_name()) + ")");
      }
      slot = value;
    }
  }
}

std::string env_name(const std::string& path) {
  std::string name = "ALPHAKIT_";
  for (char ch : path) {
    name += ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  }
  return name;
}

void apply_env(ordered_json& node, const std::string& path, const EnvLookup& env) {
  if (node.is_object() && is_open_map(path)) {
    // The whole map is one value: ALPHAKIT_PATHS_PRED_DIRS='{"m": "dir"}'.
    if (const auto text = env(env_name(path))) {
      ordered_json replacement = ordered_json::object();
      merge_into(replacement, parse_object(*text, "environment " + env_name(path)), path);
      node = std::move(replacement);
    }
    return;
  }
  if (node.is_object()) {
    for (auto& [key, value] : node.items()) {
      apply_env(value, path.empty() ? key : path + "." + key, env);
    }
    return;
  }
  const std::string name = env_name(path);
  const auto text = env(name);
  if (!text) return;
  if (node.is_string()) {
    node = *text;
    return;
  }
  ordered_json parsed;
  try {
    parsed = ordered_json::parse(*text);
  } catch (const nlohmann::json::exception&) {
    throw InputError("environment " + name + ": cannot parse '" + *text + "'");
  }
  if (!same_kind(node, parsed)) {
    throw InputError("environment " + name + ": expected " + std::string(node.type_name()));
  }
  node = std::move(parsed);
}

RunConfig from_merged(const ordered_json& j) {
  RunConfig c;
  try {
    c.seed = j.at("seed").get<std::uint64_t>();
    c.workers = j.at("workers").get<int>();
    c.output_dir = j.at("output_dir").get<std::string>();
    const auto& p = j.at("paths");
    c.paths.train = split_from(p.at("train"));
    c.paths.test = split_from(p.at("test"));
    c.paths.manifest = p.at("manifest").get<std::string>();
    c.paths.gt_dir = p.at("gt_dir").get<std::string>();
    c.paths.alpha_dir = p.at("alpha_dir").get<std::string>();
    c.paths.trimap_dir = p.at("trimap_dir").get<std::string>();
    for (const auto& [name, dir] : p.at("pred_dirs").items()) {
      c.paths.pred_dirs[name] = dir.get<std::string>();
    }
    c.rules.train_bg_per_fg = j.at("rules").at("train_bg_per_fg").get<int>();
    c.rules.test_bg_per_fg = j.at("rules").at("test_bg_per_fg").get<int>();
    const auto& pl = j.at("pipeline");
    PipelineConfig& q = c.pipeline;
    q.patch_size = pl.at("patch_size").get<int>();
    q.rotation_deg = pl.at("rotation_deg").get<double>();
    q.scale_min = pl.at("scale_min").get<double>();
    q.scale_max = pl.at("scale_max").get<double>();
    q.shear_deg = pl.at("shear_deg").get<double>();
    q.flip_probability = pl.at("flip_probability").get<double>();
    q.combine_probability = pl.at("combine_probability").get<double>();
    q.resize_min = pl.at("resize_min").get<double>();
    q.resize_max = pl.at("resize_max").get<double>();
    q.jitter_hue = pl.at("jitter_hue").get<double>();
    q.jitter_saturation = pl.at("jitter_saturation").get<double>();
    q.jitter_brightness = pl.at("jitter_brightness").get<double>();
    q.train_min_radius = pl.at("train_min_radius").get<int>();
    q.train_max_radius = pl.at("train_max_radius").get<int>();
    c.policy = policy_from(j.at("policy"));
    c.sweep.clear();
    for (const auto& s : j.at("trimap").at("sweep")) {
      c.sweep.push_back({s.at("label").get<std::string>(), s.at("min").get<int>(),
                         s.at("max").get<int>()});
    }
    const auto& m = j.at("metrics");
    c.metrics.grad_sigma = m.at("grad_sigma").get<double>();
    c.metrics.grad_power = m.at("grad_power").get<double>();
    c.metrics.conn_step = m.at("conn_step").get<double>();
    c.metrics.conn_theta = m.at("conn_theta").get<double>();
    c.metrics.connectivity = m.at("connectivity").get<int>();
    const std::string region = m.at("region").get<std::string>();
    if (region == "unknown") {
      c.metrics.region = MetricRegion::kUnknown;
    } else if (region == "whole_image") {
      c.metrics.region = MetricRegion::kWholeImage;
    } else {
      throw InputError("metrics.region must be unknown or whole_image");
    }
    c.augment_count = j.at("augment").at("count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ordered_json to_ordered(const RunConfig& c) {
  ordered_json pred = ordered_json::object();
  for (const auto& [name, dir] : c.paths.pred_dirs) pred[name] = dir;
  ordered_json sweep = ordered_json::array();
  for (const SweepRange& s : c.sweep) {
    sweep.push_back({{"label", s.label}, {"min", s.min_radius}, {"max", s.max_radius}});
  }
  const PipelineConfig& q = c.pipeline;
  ordered_json j;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["output_dir"] = c.output_dir;
  j["paths"] = {{"train", split_json(c.paths.train)},
                {"test", split_json(c.paths.test)},
                {"manifest", c.paths.manifest},
                {"gt_dir", c.paths.gt_dir},
                {"alpha_dir", c.paths.alpha_dir},
                {"trimap_dir", c.paths.trimap_dir},
                {"pred_dirs", std::move(pred)}};
  j["rules"] = {{"train_bg_per_fg", c.rules.train_bg_per_fg},
                {"test_bg_per_fg", c.rules.test_bg_per_fg}};
  j["pipeline"] = {{"patch_size", q.patch_size},
                   {"rotation_deg", q.rotation_deg},
                   {"scale_min", q.scale_min},
                   {"scale_max", q.scale_max},
                   {"shear_deg", q.shear_deg},
                   {"flip_probability", q.flip_probability},
                   {"combine_probability", q.combine_probability},
                   {"resize_min", q.resize_min},
                   {"resize_max", q.resize_max},
                   {"jitter_hue", q.jitter_hue},
                   {"jitter_saturation", q.jitter_saturation},
                   {"jitter_brightness", q.jitter_brightness},
                   {"train_min_radius", q.train_min_radius},
                   {"train_max_radius", q.train_max_radius}};
  j["policy"] = policy_json(c.policy);
  j["trimap"] = {{"sweep", std::move(sweep)}};
  j["metrics"] = {{"grad_sigma", c.metrics.grad_sigma},
                  {"grad_power", c.metrics.grad_power},
                  {"conn_step", c.metrics.conn_step},
                  {"conn_theta", c.metrics.conn_theta},
                  {"connectivity", c.metrics.connectivity},
                  {"region", std::string(to_string(c.metrics.region))}};
  j["augment"] = {{"count", c.augment_count}};
  return j;
}

}  // namespace

void RunConfig::validate() const {
  if (workers < 1) throw InputError("config: workers must be >= 1");
  if (output_dir.empty()) throw InputError("config: output_dir must not be empty");
  rules.validate();
  pipeline.validate();
  policy.validate();
  if (sweep.empty()) throw InputError("config: trimap.sweep must not be empty");
  std::set<std::string> labels;
  for (const SweepRange& s : sweep) {
    if (s.label.empty()) throw InputError("config: sweep label must not be empty");
    if (!labels.insert(s.label).second) {
      throw InputError("config: duplicate sweep label '" + s.label + "'");
    }
    if (s.min_radius < 1 || s.min_radius > s.max_radius) {
      throw InputError("config: sweep '" + s.label + "' needs 1 <= min <= max");
    }
  }
  if (!(metrics.grad_sigma > 0)) throw InputError("config: metrics.grad_sigma must be > 0");
  if (!(metrics.grad_power > 0)) throw InputError("config: metrics.grad_power must be > 0");
  if (!(metrics.conn_step > 0 && metrics.conn_step < 1)) {
    throw InputError("config: metrics.conn_step must be in (0,1)");
  }
  if (!(metrics.conn_theta >= 0)) throw InputError("config: metrics.conn_theta must be >= 0");
  if (metrics.connectivity != 4 && metrics.connectivity != 8) {
    throw InputError("config: metrics.connectivity must be 4 or 8");
  }
}

std::filesystem::path RunConfig::manifest_path() const {
  if (!paths.manifest.empty()) return paths.manifest;
  return std::filesystem::path(output_dir) / "manifest.json";
}

std::string RunConfig::to_json() const { return to_ordered(*this).dump(2) + "\n"; }

RunConfig RunConfig::from_json(std::string_view text) {
  ordered_json merged = to_ordered(RunConfig{});
  merge_into(merged, parse_object(text, "config"), "");
  return from_merged(merged);
}

std::optional<std::string> process_env(const std::string& name) {
  const char* value = std::getenv(name.c_str());
  if (!value) return std::nullopt;
  return std::string(value);
}

std::string apply_env_overrides(std::string_view json_text, const EnvLookup& env) {
  ordered_json j = parse_object(json_text, "config");
  apply_env(j, "", env);
  return j.dump(2) + "\n";
}

RunConfig load_config(const std::optional<std::filesystem::path>& path, const EnvLookup& env) {
  ordered_json merged = to_ordered(RunConfig{});
  if (path) {
    if (!std::filesystem::is_regular_file(*path)) {
      throw InputError("config file not found: '" + path->string() + "'");
    }
    merge_into(merged, parse_object(read_text_file(*path), "config '" + path->string() + "'"),
               "");
  }
  apply_env(merged, "", env);
  return from_merged(merged);
}

SaPolicy load_policy(const std::filesystem::path& path, const SaPolicy& base) {
  if (!std::filesystem::is_regular_file(path)) {
    throw InputError("policy file not found: '" + path.string() + "'");
  }
  ordered_json merged = policy_json(base);
  merge_into(merged, parse_object(read_text_file(path), "policy '" + path.string() + "'"),
             "policy");
  SaPolicy p = policy_from(merged);
  p.validate();
  return p;
}

}  // namespace alphakit
