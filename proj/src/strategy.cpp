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

#include "alphakit/strategy.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "alphakit/compose.hpp"
#include "alphakit/log.hpp"
#include "json.hpp"

namespace alphakit {
namespace {

constexpr std::array<std::string_view, 4> kStrategyNames{"none", "AF", "AFB", "AC"};
constexpr std::array<std::string_view, 3> kGtActionNames{"keep", "modify_alpha",
                                                         "request_pseudo_label"};

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InputError(std::string("policy: ") + name + " must lie in [0,1]");
  }
}

void check_triple(const CategoryProbs& t, const char* name) {
  check_probability(t.linear, name);
  check_probability(t.nonlinear, name);
  check_probability(t.region, name);
  if (std::fabs(t.linear + t.nonlinear + t.region - 1.0) > 1e-9) {
    throw InputError(std::string("policy: ") + name + " must sum to 1");
  }
}

AugmentationOp draw_op(const CategoryProbs& probs, const AugmentRanges& ranges, Rng& rng) {
  const double u = rng.uniform();
  const Category category = u < probs.linear                     ? Category::kLinearPixelwise
                            : u < probs.linear + probs.nonlinear ? Category::kNonlinearPixelwise
                                                                 : Category::kRegionWise;
  const std::vector<OpKind>& kinds = registry().at(category);
  const OpKind kind = kinds[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(kinds.size()) - 1))];
  return AugmentationOp(kind, ranges.get(kind));
}

bool is_channel_op(OpKind kind) {
  return kind == OpKind::kChannelInversion || kind == OpKind::kChannelShuffle;
}

GtAction ac_action(const SaPolicy& policy, const AugmentationOp& op) {
  switch (op.category()) {
    case Category::kLinearPixelwise:
      return policy.ac_linear_gt == AcLinearGt::kPseudoLabel && is_channel_op(op.kind())
                 ? GtAction::kRequestPseudoLabel
                 : GtAction::kKeep;
    case Category::kNonlinearPixelwise:
      return GtAction::kRequestPseudoLabel;
    case Category::kRegionWise:
      return policy.ac_region_gt == AcRegionGt::kModifyAlpha ? GtAction::kModifyAlpha
                                                             : GtAction::kRequestPseudoLabel;
  }
  return GtAction::kKeep;
}

OpRecord record_of(const AugmentationOp& op, std::string target) {
  return {op.kind(), std::move(target), op.realization().values};
}

}  // namespace

std::string_view to_string(Strategy strategy) {
  return kStrategyNames[static_cast<std::size_t>(strategy)];
}

std::string_view to_string(GtAction action) {
  return kGtActionNames[static_cast<std::size_t>(action)];
}

std::optional<Strategy> strategy_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kStrategyNames.size(); ++i) {
    if (kStrategyNames[i] == name) return static_cast<Strategy>(i);
  }
  return std::nullopt;
}

std::optional<GtAction> gt_action_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kGtActionNames.size(); ++i) {
    if (kGtActionNames[i] == name) return static_cast<GtAction>(i);
  }
  return std::nullopt;
}

void SaPolicy::validate() const {
  check_probability(p_af, "p_af");
  check_probability(p_afb, "p_afb");
  check_probability(p_ac_given_neither, "p_ac_given_neither");
  if (p_af + p_afb > 1.0 + 1e-12) throw InputError("policy: p_af + p_afb must not exceed 1");
  check_triple(category_probs_af_afb, "category_probs_af_afb");
  check_triple(category_probs_ac, "category_probs_ac");
  for (const auto& [kind, range] : ranges.overrides) {
    if (!(range.lo <= range.hi)) {
      throw InputError("policy: empty range for " + std::string(to_string(kind)));
    }
  }
}

SaPolicy SaPolicy::disabled() {
  SaPolicy p;
  p.p_af = 0.0;
  p.p_afb = 0.0;
  p.p_ac_given_neither = 0.0;
  return p;
}

StrategyDecision sample_decision(const SaPolicy& policy, Rng& rng) {
  policy.validate();
  StrategyDecision d;
  const double u = rng.uniform();
  if (u < policy.p_af) {
    d.strategy = Strategy::kAF;
    d.ops.push_back(draw_op(policy.category_probs_af_afb, policy.ranges, rng));
  } else if (u < policy.p_af + policy.p_afb) {
    d.strategy = Strategy::kAFB;
    d.ops.push_back(draw_op(policy.category_probs_af_afb, policy.ranges, rng));
    d.ops.push_back(draw_op(policy.category_probs_af_afb, policy.ranges, rng));
  } else if (rng.bernoulli(policy.p_ac_given_neither)) {
    d.strategy = Strategy::kAC;
    d.ops.push_back(draw_op(policy.category_probs_ac, policy.ranges, rng));
    d.gt_action = ac_action(policy, d.ops.front());
  }
  return d;
}

AugmentedSample augment_sample(SamplePair sample, const StrategyDecision& decision, Rng& rng) {
  sample.check_shapes();
  const std::size_t expected_ops = decision.strategy == Strategy::kNone  ? 0
                                   : decision.strategy == Strategy::kAFB ? 2
                                                                         : 1;
  if (decision.ops.size() != expected_ops) {
    throw InputError("augment_sample: decision carries the wrong number of ops");
  }
  const bool pre_composition =
      decision.strategy == Strategy::kAF || decision.strategy == Strategy::kAFB;
  if (pre_composition && sample.composite) {
    throw InputError("augment_sample: AF/AFB need a sample that is not yet composited");
  }
  if (pre_composition && decision.gt_action != GtAction::kKeep) {
    throw InputError("augment_sample: AF/AFB must keep the ground truth");
  }

  const int w = sample.fg.width();
  const int h = sample.fg.height();
  AugmentationRecord record;
  record.strategy = decision.strategy;
  record.gt_action = decision.gt_action;

  switch (decision.strategy) {
    case Strategy::kNone:
      if (!sample.composite) sample.composite = composite(sample.fg, sample.bg, sample.alpha);
      break;
    case Strategy::kAF: {
      const AugmentationOp op = realize(decision.ops[0], rng, w, h, &sample.fg);
      sample.fg = apply(op, sample.fg);
      record.ops.push_back(record_of(op, "fg"));
      sample.composite = composite(sample.fg, sample.bg, sample.alpha);
      break;
    }
    case Strategy::kAFB: {
      const AugmentationOp fg_op = realize(decision.ops[0], rng, w, h, &sample.fg);
      const AugmentationOp bg_op = realize(decision.ops[1], rng, w, h, &sample.bg);
      sample.fg = apply(fg_op, sample.fg);
      sample.bg = apply(bg_op, sample.bg);
      record.ops.push_back(record_of(fg_op, "fg"));
      record.ops.push_back(record_of(bg_op, "bg"));
      sample.composite = composite(sample.fg, sample.bg, sample.alpha);
      break;
    }
    case Strategy::kAC: {
      const Category category = decision.ops[0].category();
      if (decision.gt_action == GtAction::kKeep && category != Category::kLinearPixelwise) {
        throw InputError("augment_sample: AC can keep alpha only for linear pixel-wise ops");
      }
      if (decision.gt_action == GtAction::kModifyAlpha && category != Category::kRegionWise) {
        throw InputError("augment_sample: alpha modification applies to region-wise ops only");
      }
      const RasterImage image =
          sample.composite ? *sample.composite : composite(sample.fg, sample.bg, sample.alpha);
      const AugmentationOp op = realize(decision.ops[0], rng, w, h, &image);
      sample.composite = apply(op, image);
      record.ops.push_back(record_of(op, "composite"));
      if (decision.gt_action == GtAction::kKeep) {
        // Linear: the same realised map on F and B keeps I = aF + (1-a)B.
        sample.fg = apply(op, sample.fg);
        sample.bg = apply(op, sample.bg);
      } else if (decision.gt_action == GtAction::kModifyAlpha) {
        record.residual_unmodified_gt =
            composition_residual(*sample.composite, sample.fg, sample.bg, sample.alpha);
        sample.alpha = apply_to_alpha(op, sample.alpha);
      } else {
        record.pseudo_label_pending = true;
        record.residual_unmodified_gt =
            composition_residual(*sample.composite, sample.fg, sample.bg, sample.alpha);
      }
      break;
    }
  }
  record.residual = composition_residual(*sample.composite, sample.fg, sample.bg, sample.alpha);
  return {std::move(sample), std::move(record)};
}

void PseudoLabeler::register_hook(PseudoLabelHook hook) { hook_ = std::move(hook); }

bool PseudoLabeler::resolve(AugmentedSample& s, const Trimap& trimap, Rng& rng) {
  AugmentationRecord& rec = s.record;
  if (!rec.pseudo_label_pending) return true;
  if (!hook_) {
    rec.usable = false;
    ++skipped_;
    return false;
  }
  RasterImage view = *s.sample.composite;
  if (view_ == PseudoLabelView::kChannelShuffle) {
    const AugmentationOp shuffle =
        realize(AugmentationOp(OpKind::kChannelShuffle), rng, view.width(), view.height());
    view = apply(shuffle, view);
  }
  AlphaMatte label;
  try {
    ++invocations_;
    if (serialized_) {
      std::lock_guard lock(call_mutex_);
      label = hook_(view, trimap);
    } else {
      label = hook_(view, trimap);
    }
  } catch (const std::exception& e) {
    log_error(std::string("pseudo-label hook failed: ") + e.what());
    rec.usable = false;
    ++skipped_;
    return false;
  }
  if (!label.same_shape(s.sample.alpha)) {
    log_error("pseudo-label hook returned a " + std::to_string(label.width()) + "x" +
              std::to_string(label.height()) + " matte for a " +
              std::to_string(s.sample.alpha.width()) + "x" +
              std::to_string(s.sample.alpha.height()) + " sample; dropping it");
    rec.usable = false;
    ++skipped_;
    return false;
  }
  for (float& v : label.values()) v = std::clamp(v, 0.0f, 1.0f);
  s.sample.alpha = std::move(label);
  rec.pseudo_label_pending = false;
  rec.pseudo_label_applied = true;
  rec.residual = composition_residual(*s.sample.composite, s.sample.fg, s.sample.bg,
                                      s.sample.alpha);
  return true;
}

std::string AugmentationRecord::to_json_line() const {
  nlohmann::ordered_json j;
  j["index"] = index;
  j["seed"] = seed;
  j["entry"] = entry_id;
  j["strategy"] = to_string(strategy);
  nlohmann::ordered_json ops_json = nlohmann::ordered_json::array();
  for (const OpRecord& op : ops) {
    ops_json.push_back({{"kind", to_string(op.kind)},
                        {"category", to_string(category_of(op.kind))},
                        {"target", op.target},
                        {"values", op.values}});
  }
  j["ops"] = std::move(ops_json);
  j["gt_action"] = to_string(gt_action);
  j["pseudo_label_pending"] = pseudo_label_pending;
  j["pseudo_label_applied"] = pseudo_label_applied;
  j["usable"] = usable;
  j["residual"] = residual;
  if (residual_unmodified_gt) {
    j["residual_unmodified_gt"] = *residual_unmodified_gt;
  } else {
    j["residual_unmodified_gt"] = nullptr;
  }
  j["trimap_radius"] = trimap_radius;
  return j.dump();
}

AugmentationRecord AugmentationRecord::from_json_line(std::string_view line) {
  AugmentationRecord r;
  try {
    const auto j = nlohmann::json::parse(line);
    r.index = j.at("index").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.entry_id = j.at("entry").get<std::string>();
    const auto strategy = strategy_from_string(j.at("strategy").get<std::string>());
    const auto action = gt_action_from_string(j.at("gt_action").get<std::string>());
    if (!strategy || !action) throw InputError("unknown strategy or gt_action");
    r.strategy = *strategy;
    r.gt_action = *action;
    for (const auto& op : j.at("ops")) {
      const auto kind = op_kind_from_string(op.at("kind").get<std::string>());
      if (!kind) throw InputError("unknown op kind");
      r.ops.push_back({*kind, op.at("target").get<std::string>(),
                       op.at("values").get<std::vector<double>>()});
    }
    r.pseudo_label_pending = j.at("pseudo_label_pending").get<bool>();
    r.pseudo_label_applied = j.at("pseudo_label_applied").get<bool>();
    r.usable = j.at("usable").get<bool>();
    r.residual = j.at("residual").get<double>();
    if (!j.at("residual_unmodified_gt").is_null()) {
      r.residual_unmodified_gt = j.at("residual_unmodified_gt").get<double>();
    }
    r.trimap_radius = j.at("trimap_radius").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed augmentation record: ") + e.what());
  }
  return r;
}

}  // namespace alphakit
