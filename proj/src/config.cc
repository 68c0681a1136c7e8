/* Copyright 2026 The vidsum Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "vidsum/config.h"

#include <optional>
#include <set>
#include <type_traits>

#include "vidsum/errors.h"

namespace vidsum {
namespace {

using nlohmann::json;

std::string_view KernelName(KernelKind k) {
  return k == KernelKind::kLinear ? "linear" : "rbf";
}
KernelKind ParseKernel(std::string_view s) {
  if (s == "linear") return KernelKind::kLinear;
  if (s == "rbf") return KernelKind::kRbf;
  throw ValueError("unknown kernel '" + std::string(s) + "'");
}
std::string_view MarkName(MarkRule m) {
  return m == MarkRule::kPositive ? "positive" : "median";
}
MarkRule ParseMark(std::string_view s) {
  if (s == "positive") return MarkRule::kPositive;
  if (s == "median") return MarkRule::kAboveMedian;
  throw ValueError("unknown mark rule '" + std::string(s) + "'");
}
std::string_view EvalMaskName(EvalMask m) {
  return m == EvalMask::kKnapsack ? "knapsack" : "percentile";
}
EvalMask ParseEvalMask(std::string_view s) {
  if (s == "knapsack") return EvalMask::kKnapsack;
  if (s == "percentile") return EvalMask::kPercentile;
  throw ValueError("unknown eval mask '" + std::string(s) + "'");
}
std::string_view ShotValueName(ShotValue v) {
  return v == ShotValue::kMean ? "mean" : "mean_x_length";
}
ShotValue ParseShotValue(std::string_view s) {
  if (s == "mean") return ShotValue::kMean;
  if (s == "mean_x_length") return ShotValue::kMeanTimesLength;
  throw ValueError("unknown shot value '" + std::string(s) + "'");
}

}  // namespace

std::string_view ToString(StreamSelection s) {
  switch (s) {
    case StreamSelection::kRgb: return "rgb";
    case StreamSelection::kFlow: return "flow";
    case StreamSelection::kFused: return "fused";
  }
  return "?";
}

StreamSelection ParseStreamSelection(std::string_view s) {
  if (s == "rgb") return StreamSelection::kRgb;
  if (s == "flow") return StreamSelection::kFlow;
  if (s == "fused") return StreamSelection::kFused;
  throw ValueError("unknown stream selection '" + std::string(s) + "'");
}

void Validate(const RunConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ValueError(std::string("invalid config: ") + what);
  };
  require(c.target_fps > 0.0, "target_fps must be positive");
  require(c.encdec_window >= 1 && c.score_window >= 1, "windows must be >= 1");
  require(c.encdec_stride >= 1, "encdec_stride must be >= 1");
  require(c.budget > 0.0 && c.budget <= 1.0, "budget must lie in (0, 1]");
  require(c.percentile > 0.0 && c.percentile < 1.0, "percentile must lie in (0, 1)");
  require(c.epochs >= 0, "epochs must be >= 0");
  require(c.batch >= 1, "batch must be >= 1");
  require(c.lr > 0.0, "lr must be positive");
  require(c.val_fraction > 0.0 && c.val_fraction < 1.0, "val_fraction in (0, 1)");
  require(c.kts_penalty >= 0.0, "kts_penalty must be >= 0");
  require(c.kts_gamma > 0.0, "kts_gamma must be positive");
  require(c.folds >= 2, "folds must be >= 2");
  require(c.user_fraction > 0.0 && c.user_fraction <= 1.0, "user_fraction in (0, 1]");
  require(c.encdec_hidden >= 1 && c.latent_dim >= 1 && c.lstm_hidden >= 1 &&
              c.conv_channels >= 1 && c.mlp_units >= 1,
          "layer widths must be >= 1");
}

json ToJson(const RunConfig& c) {
  json j;
  j["target_fps"] = c.target_fps;
  j["encdec_window"] = c.encdec_window;
  j["encdec_stride"] = c.encdec_stride;
  j["score_window"] = c.score_window;
  j["budget"] = c.budget;
  j["percentile"] = c.percentile;
  j["epochs"] = c.epochs;
  j["encdec_epochs"] = c.encdec_epochs;
  j["batch"] = c.batch;
  j["lr"] = c.lr;
  j["val_fraction"] = c.val_fraction;
  j["kts_penalty"] = c.kts_penalty;
  j["kts_kernel"] = KernelName(c.kts_kernel);
  j["kts_gamma"] = c.kts_gamma;
  j["kts_stream"] = ToString(c.kts_stream);
  j["max_shot_seconds"] = c.max_shot_seconds;
  j["seed"] = c.seed;
  j["variant"] = ToString(c.variant);
  j["stream"] = ToString(c.stream);
  j["folds"] = c.folds;
  j["stratify"] = c.stratify;
  j["user_fraction"] = c.user_fraction;
  j["mark_rule"] = MarkName(c.mark_rule);
  j["eval_mask"] = EvalMaskName(c.eval_mask);
  j["shot_value"] = ShotValueName(c.shot_value);
  j["encdec_hidden"] = c.encdec_hidden;
  j["encdec_activation"] = ToString(c.encdec_activation);
  j["latent_dim"] = c.latent_dim;
  j["lstm_hidden"] = c.lstm_hidden;
  j["conv_channels"] = c.conv_channels;
  j["mlp_units"] = c.mlp_units;
  return j;
}

RunConfig MergeJson(const RunConfig& base, const json& j) {
  if (!j.is_object()) throw FormatError("config must be a JSON object");
  const json known = ToJson(base);
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ValueError("unknown config key '" + key + "'");
  }
  RunConfig c = base;
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    auto get_str = [&](const char* key) -> std::optional<std::string> {
      if (!j.contains(key)) return std::nullopt;
      return j.at(key).get<std::string>();
    };
    get("target_fps", c.target_fps);
    get("encdec_window", c.encdec_window);
    get("encdec_stride", c.encdec_stride);
    get("score_window", c.score_window);
    get("budget", c.budget);
    get("percentile", c.percentile);
    get("epochs", c.epochs);
    get("encdec_epochs", c.encdec_epochs);
    get("batch", c.batch);
    get("lr", c.lr);
    get("val_fraction", c.val_fraction);
    get("kts_penalty", c.kts_penalty);
    if (auto s = get_str("kts_kernel")) c.kts_kernel = ParseKernel(*s);
    get("kts_gamma", c.kts_gamma);
    if (auto s = get_str("kts_stream")) c.kts_stream = ParseStream(*s);
    get("max_shot_seconds", c.max_shot_seconds);
    get("seed", c.seed);
    if (auto s = get_str("variant")) c.variant = ParseVariant(*s);
    if (auto s = get_str("stream")) c.stream = ParseStreamSelection(*s);
    get("folds", c.folds);
    get("stratify", c.stratify);
    get("user_fraction", c.user_fraction);
    if (auto s = get_str("mark_rule")) c.mark_rule = ParseMark(*s);
    if (auto s = get_str("eval_mask")) c.eval_mask = ParseEvalMask(*s);
    if (auto s = get_str("shot_value")) c.shot_value = ParseShotValue(*s);
    get("encdec_hidden", c.encdec_hidden);
    if (auto s = get_str("encdec_activation")) c.encdec_activation = ParseActivation(*s);
    get("latent_dim", c.latent_dim);
    get("lstm_hidden", c.lstm_hidden);
    get("conv_channels", c.conv_channels);
    get("mlp_units", c.mlp_units);
  } catch (const json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  return c;
}

EncDecConfig MakeEncDecConfig(const RunConfig& c, std::uint64_t seed) {
  EncDecConfig e;
  e.hidden_dim = c.encdec_hidden;
  e.latent_dim = c.latent_dim;
  e.activation = c.encdec_activation;
  e.window_len = c.encdec_window;
  e.stride = c.encdec_stride;
  e.val_fraction = c.val_fraction;
  e.train.epochs = c.encdec_epochs < 0 ? c.epochs : c.encdec_epochs;
  e.train.batch_size = c.batch;
  e.train.adam.lr = c.lr;
  e.train.seed = seed;
  return e;
}

ScorerConfig MakeScorerConfig(const RunConfig& c, std::uint64_t seed) {
  ScorerConfig s;
  s.variant = c.variant;
  s.lstm_hidden = c.lstm_hidden;
  s.conv_channels = c.conv_channels;
  s.mlp_units = c.mlp_units;
  s.window_len = c.score_window;
  s.val_fraction = c.val_fraction;
  s.train.epochs = c.epochs;
  s.train.batch_size = c.batch;
  s.train.adam.lr = c.lr;
  s.train.seed = seed;
  return s;
}

KtsConfig MakeKtsConfig(const RunConfig& c, double fps) {
  KtsConfig k;
  k.kernel.kind = c.kts_kernel;
  k.kernel.gamma = c.kts_gamma;
  k.penalty = c.kts_penalty;
  if (c.max_shot_seconds > 0.0) {
    k.max_seg_frames = MaxSegmentFrames(c.max_shot_seconds, fps);
  }
  return k;
}

ConsolidationConfig MakeConsolidationConfig(const RunConfig& c) {
  ConsolidationConfig k;
  k.rule = BinarizeRule::kUserFraction;
  k.user_fraction = c.user_fraction;
  k.mark = c.mark_rule;
  return k;
}

}  // namespace vidsum
