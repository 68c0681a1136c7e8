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

#ifndef VIDSUM_PIPELINE_H_
#define VIDSUM_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vidsum/config.h"
#include "vidsum/dataio.h"
#include "vidsum/encdec.h"
#include "vidsum/kts.h"
#include "vidsum/scorer.h"
#include "vidsum/select.h"

namespace vidsum {

// One video on the scored timeline: features and targets subsampled to the
// run's target fps, targets consolidated from the user annotations.
struct PreparedVideo {
  std::string video_id;
  std::optional<std::string> category;
  double fps = 0.0;
  Mat rgb;
  std::optional<Mat> flow;
  std::vector<double> targets;
  std::size_t source_frames = 0;

  const Mat& Features(Stream s) const;
};

// Reads, validates, consolidates and subsamples one manifest entry. The
// annotation frame count must equal the RGB frame count.
PreparedVideo PrepareVideo(const DatasetManifest& manifest,
                           const ManifestEntry& entry, const RunConfig& cfg,
                           bool need_flow);

// Trained model for one stream. SummaryNet feeds encoder latents to its
// scorer; the other variants score raw features.
struct StreamModel {
  Stream stream = Stream::kRgb;
  std::optional<EncDecModel> encdec;
  ScorerModel scorer;

  Variant variant() const { return scorer.cfg.variant; }
  Mat ModelInput(const Mat& features) const;
  ScoreVector Score(const Mat& features, const std::string& video_id) const;
};

StreamModel TrainStreamModel(const std::vector<const PreparedVideo*>& videos,
                             Stream stream, const RunConfig& cfg,
                             std::uint64_t seed);

// Only the encoder-decoder half, for the train-encdec command.
EncDecModel TrainEncDecOn(const std::vector<const PreparedVideo*>& videos,
                          Stream stream, const RunConfig& cfg,
                          std::uint64_t seed);

ModelBundle ToBundle(const StreamModel& model);
StreamModel StreamModelFromBundle(const ModelBundle& bundle);

// Scores a video with the selected streams (averaging for fused).
ScoreVector ScoreWithModels(const std::vector<const StreamModel*>& models,
                            const PreparedVideo& video);

Segmentation SegmentVideo(const PreparedVideo& video, const RunConfig& cfg);

// Hex SHA-256 of a byte string, for reproducibility records.
std::string Sha256Hex(std::string_view bytes);

}  // namespace vidsum

#endif  // VIDSUM_PIPELINE_H_
