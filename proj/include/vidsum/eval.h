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

#ifndef VIDSUM_EVAL_H_
#define VIDSUM_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vidsum/config.h"
#include "vidsum/dataio.h"

namespace vidsum {

// Percentages in [0, 100].
struct OverlapScores {
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
};

// Temporal overlap of two 0/1 frame masks. Precision = overlap / |pred|,
// recall = overlap / |gt| (0 for an empty denominator), F = 2PR / (P + R)
// (0 when P + R = 0).
OverlapScores OverlapMetrics(std::span<const int> pred, std::span<const int> gt);

// Fold index of every item. Items are ranked by a seeded shuffle of their
// ids, so the result does not depend on input order. With `stratify` and
// categories present, each category's videos are dealt to consecutive folds
// so a test fold holds at most one video per category whenever a category
// has no more videos than there are folds.
std::vector<std::size_t> AssignFolds(
    const std::vector<std::string>& ids,
    const std::vector<std::optional<std::string>>& categories,
    std::size_t folds, bool stratify, std::uint64_t seed);

struct VideoResult {
  std::string video_id;
  std::optional<std::string> category;
  std::size_t fold = 0;
  std::size_t n_frames = 0;
  std::size_t budget_frames = 0;
  std::size_t selected_frames = 0;
  double summary_fraction = 0.0;
  OverlapScores knapsack;    // key-shot summary vs ground truth
  OverlapScores percentile;  // percentile frame mask vs ground truth
  double fscore = 0.0;       // from the mask selected by cfg.eval_mask
  std::vector<double> scores;  // model scores on the subsampled timeline
  std::vector<int> gt;         // consolidated ground truth, same timeline
};

struct EvalReport {
  RunConfig config;
  std::vector<VideoResult> per_video;  // sorted by video_id
  std::vector<std::vector<std::string>> folds;
  double mean_fscore = 0.0;
  double mean_knapsack_fscore = 0.0;
  double mean_percentile_fscore = 0.0;
};

using ProgressFn = std::function<void(const std::string&)>;

// k-fold protocol: per fold, train on the other folds (with a further
// train/validation split inside), score the held-out videos, segment them,
// select key shots under the budget and compare with the consolidated ground
// truth. Throws ValueError when folds exceed the number of videos.
EvalReport Crossval(const DatasetManifest& manifest, const RunConfig& cfg,
                    const ProgressFn& progress = {});

nlohmann::json ToJson(const EvalReport& report);
std::string FormatReportTable(const EvalReport& report);
// Two-column "score gt" text, one frame per line, for plotting.
std::string FormatCurve(const VideoResult& r);

}  // namespace vidsum

#endif  // VIDSUM_EVAL_H_
