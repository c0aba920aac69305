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

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alphakit/augment.hpp"
#include "alphakit/raster.hpp"
#include "alphakit/rng.hpp"

namespace alphakit {

/// Where the strong augmentation is applied relative to compositing.
enum class Strategy {
  kNone,
  kAF,   // foreground alone, before compositing
  kAFB,  // foreground and background independently, before compositing
  kAC,   // the composited image
};

enum class GtAction { kKeep, kModifyAlpha, kRequestPseudoLabel };

std::string_view to_string(Strategy strategy);
std::string_view to_string(GtAction action);
std::optional<Strategy> strategy_from_string(std::string_view name);
std::optional<GtAction> gt_action_from_string(std::string_view name);

/// Probabilities of drawing a linear / nonlinear / region-wise op.
struct CategoryProbs {
  double linear = 0.0;
  double nonlinear = 0.0;
  double region = 0.0;
};

/// Ground-truth handling for region-wise ops under AC.
enum class AcRegionGt { kModifyAlpha, kPseudoLabel };

/// Ground-truth handling for linear ops under AC. Linear ops keep the
/// equation intact, so keeping alpha is exact; the pseudo-label route is
/// offered for channel-permuting views.
enum class AcLinearGt { kKeep, kPseudoLabel };

struct SaPolicy {
  double p_af = 0.25;
  double p_afb = 0.25;
  double p_ac_given_neither = 0.1;
  CategoryProbs category_probs_af_afb{0.8, 0.1, 0.1};
  CategoryProbs category_probs_ac{0.2, 0.4, 0.4};
  AcRegionGt ac_region_gt = AcRegionGt::kModifyAlpha;
  AcLinearGt ac_linear_gt = AcLinearGt::kKeep;
  AugmentRanges ranges;

  /// Throws InputError on any out-of-range probability.
  void validate() const;

  /// Policy that never augments.
  static SaPolicy disabled();
};

struct StrategyDecision {
  Strategy strategy = Strategy::kNone;
  /// Unrealised ops: one for AF and AC, two for AFB (fg first, then bg).
  std::vector<AugmentationOp> ops;
  GtAction gt_action = GtAction::kKeep;
};

/// Draws a strategy, the category and kind of each op, and the resulting
/// ground-truth action.
StrategyDecision sample_decision(const SaPolicy& policy, Rng& rng);

struct OpRecord {
  OpKind kind;
  std::string target;  // "fg", "bg" or "composite"
  std::vector<double> values;
};

/// Everything needed to audit or replay one augmented sample.
struct AugmentationRecord {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  std::string entry_id;
  Strategy strategy = Strategy::kNone;
  std::vector<OpRecord> ops;
  GtAction gt_action = GtAction::kKeep;
  bool pseudo_label_pending = false;
  bool pseudo_label_applied = false;
  bool usable = true;
  /// Composition residual of the emitted (I, F, B, alpha).
  double residual = 0.0;
  /// Residual against the unmodified alpha, when alpha was replaced.
  std::optional<double> residual_unmodified_gt;
  int trimap_radius = 0;

  std::string to_json_line() const;
  static AugmentationRecord from_json_line(std::string_view line);
};

struct AugmentedSample {
  SamplePair sample;  // composite always set
  AugmentationRecord record;
};

/// Runs `decision` on `sample`: AF/AFB augment before compositing, AC after.
/// Region-wise AC ops with kModifyAlpha replace alpha by apply_to_alpha;
/// pseudo-label requests only set record.pseudo_label_pending.
AugmentedSample augment_sample(SamplePair sample, const StrategyDecision& decision, Rng& rng);

/// Supplies alpha targets for AC samples whose ground truth is unobtainable.
/// Receives the augmented composite and the sample's trimap.
using PseudoLabelHook = std::function<AlphaMatte(const RasterImage&, const Trimap&)>;

/// View handed to the hook.
enum class PseudoLabelView { kAsIs, kChannelShuffle };

/// Owns the pseudo-label hook and the skip accounting of a pipeline.
/// resolve() may be called from several workers at once.
class PseudoLabeler {
 public:
  void register_hook(PseudoLabelHook hook);
  bool has_hook() const { return static_cast<bool>(hook_); }

  /// Serialise hook calls (for host runtimes that are not re-entrant).
  void set_serialized(bool serialized) { serialized_ = serialized; }
  void set_view(PseudoLabelView view) { view_ = view; }

  /// Replaces alpha for a pending sample. Returns false (and marks the
  /// sample unusable) when no hook is registered, the hook throws, or it
  /// returns a matte of the wrong size. Samples without a pending request
  /// pass through untouched.
  bool resolve(AugmentedSample& sample, const Trimap& trimap, Rng& rng);

  std::size_t skipped() const { return skipped_.load(); }
  std::size_t invocations() const { return invocations_.load(); }
  void count_skip() { ++skipped_; }

 private:
  PseudoLabelHook hook_;
  PseudoLabelView view_ = PseudoLabelView::kChannelShuffle;
  bool serialized_ = false;
  std::mutex call_mutex_;
  std::atomic<std::size_t> skipped_{0};
  std::atomic<std::size_t> invocations_{0};
};

}  // namespace alphakit
