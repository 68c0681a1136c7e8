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

#ifndef VIDSUM_CONFIG_H_
#define VIDSUM_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "vidsum/dataio.h"
#include "vidsum/encdec.h"
#include "vidsum/kts.h"
#include "vidsum/preprocess.h"
#include "vidsum/scorer.h"
#include "vidsum/select.h"

namespace vidsum {

enum class StreamSelection { kRgb, kFlow, kFused };
enum class EvalMask { kKnapsack, kPercentile };

std::string_view ToString(StreamSelection s);
StreamSelection ParseStreamSelection(std::string_view s);

// Every tunable of the pipeline. JSON keys equal the field names.
struct RunConfig {
  double target_fps = 2.0;
  std::size_t encdec_window = 16;
  std::size_t encdec_stride = 4;
  std::size_t score_window = 5;
  double budget = 0.15;
  double percentile = 0.85;
  int epochs = 8;
  int encdec_epochs = -1;  // < 0: same as epochs
  std::size_t batch = 8;
  double lr = 1e-3;
  double val_fraction = 0.2;
  double kts_penalty = 1.0;
  KernelKind kts_kernel = KernelKind::kLinear;
  double kts_gamma = 1.0;
  Stream kts_stream = Stream::kRgb;
  double max_shot_seconds = 5.0;  // <= 0 disables the cap
  std::uint64_t seed = 0;
  Variant variant = Variant::kSummaryNet;
  StreamSelection stream = StreamSelection::kRgb;
  std::size_t folds = 5;
  bool stratify = false;
  double user_fraction = 0.5;
  MarkRule mark_rule = MarkRule::kPositive;
  EvalMask eval_mask = EvalMask::kKnapsack;
  ShotValue shot_value = ShotValue::kMean;
  std::size_t encdec_hidden = 1024;
  Activation encdec_activation = Activation::kTanh;
  std::size_t latent_dim = 512;
  std::size_t lstm_hidden = 128;
  std::size_t conv_channels = 256;
  std::size_t mlp_units = 256;
};

// Throws ValueError when a field is outside its module's valid range.
void Validate(const RunConfig& cfg);

nlohmann::json ToJson(const RunConfig& cfg);
// Overlays the keys present in `j` onto `base`. Unknown keys are rejected.
RunConfig MergeJson(const RunConfig& base, const nlohmann::json& j);

EncDecConfig MakeEncDecConfig(const RunConfig& cfg, std::uint64_t seed);
ScorerConfig MakeScorerConfig(const RunConfig& cfg, std::uint64_t seed);
KtsConfig MakeKtsConfig(const RunConfig& cfg, double fps);
ConsolidationConfig MakeConsolidationConfig(const RunConfig& cfg);

}  // namespace vidsum

#endif  // VIDSUM_CONFIG_H_
