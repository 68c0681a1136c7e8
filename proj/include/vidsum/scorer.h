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

#ifndef VIDSUM_SCORER_H_
#define VIDSUM_SCORER_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vidsum/dataio.h"
#include "vidsum/tensornet.h"

namespace vidsum {

struct ScorerConfig {
  Variant variant = Variant::kSummaryNet;
  std::size_t lstm_hidden = 128;    // per direction
  std::size_t conv_channels = 256;
  std::size_t mlp_units = 256;
  std::size_t conv_width = 3;
  Activation conv_activation = Activation::kReLU;
  std::size_t window_len = 5;
  double val_fraction = 0.2;
  TrainConfig train;
};

// Layer stacks, all ending in a single sigmoid unit applied per time step:
//   baseline:   Dense(256, sigmoid) x2
//   summarynet: BiLSTM, Conv1D, Dense(256, sigmoid) x2, Conv1D
//   convlstm:   same layers as summarynet
//   convnet:    summarynet without the BiLSTM
// SummaryNet is fed encoder latents, the others raw features; that choice is
// made by the caller through `input_dim`.
std::vector<LayerSpec> ScorerLayers(const ScorerConfig& cfg,
                                    std::size_t input_dim);

struct ScorerModel {
  ScorerConfig cfg;
  Network net;
  TrainMeta meta;
  double final_train_loss = 0.0;  // training-set loss of the kept parameters
};

ScorerModel MakeScorer(const ScorerConfig& cfg, std::size_t input_dim,
                       std::uint64_t seed);

// One video's model input (raw features or latents) and per-frame targets.
struct LabeledSequence {
  std::string video_id;
  Mat features;
  std::vector<double> targets;
};

// Trains on center-frame BCE over all stride-1 windows of the training
// videos; keeps the epoch with the lowest validation BCE.
ScorerModel TrainScorer(const std::vector<LabeledSequence>& train,
                        const std::vector<LabeledSequence>& val,
                        const ScorerConfig& cfg);

// Splits `data` by video using cfg.val_fraction, then trains.
ScorerModel TrainScorer(const std::vector<LabeledSequence>& data,
                        const ScorerConfig& cfg);

// Per-frame scores. Frames outside [first_scored, last_scored] (the edges no
// full window is centered on) hold kUnscoredFill.
struct ScoreVector {
  static constexpr double kUnscoredFill = 0.0;

  std::string video_id;
  std::vector<double> scores;
  std::size_t first_scored = 0;
  std::size_t last_scored = 0;

  bool operator==(const ScoreVector&) const = default;
};

// Slides a window_len window with `stride` over the sequence and assigns each
// prediction to the window's center frame. Windows are evaluated
// `batch_size` at a time. window_len = 0 means the model's configured length.
ScoreVector ScoreVideo(const ScorerModel& model, const Mat& features,
                       const std::string& video_id, std::size_t window_len = 0,
                       std::size_t stride = 1, std::size_t batch_size = 64);

// Element-wise mean of two streams' scores for the same video.
ScoreVector FuseStreams(const ScoreVector& rgb, const ScoreVector& flow);

// Text export: one "frame_index score" line per frame, preceded by
// "# video_id <id>" and "# coverage <first> <last>" comment lines.
std::string FormatScores(const ScoreVector& s);
ScoreVector ParseScores(std::string_view text);
std::string FormatScoresJson(const ScoreVector& s);
ScoreVector ParseScoresJson(std::string_view text);

ModelBundle ToBundle(const ScorerModel& model, Stream stream);
ScorerModel ScorerFromBundle(const ModelBundle& bundle);

}  // namespace vidsum

#endif  // VIDSUM_SCORER_H_
