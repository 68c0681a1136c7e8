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

#ifndef VIDSUM_PREPROCESS_H_
#define VIDSUM_PREPROCESS_H_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "vidsum/dataio.h"
#include "vidsum/tensor.h"

namespace vidsum {

// Frame indices kept when resampling from `fps` to `target_fps`:
// round(k * fps / target_fps) for k = 0, 1, ... while below `num_frames`,
// sorted and deduplicated.
std::vector<std::size_t> SubsampleIndices(std::size_t num_frames, double fps,
                                          double target_fps);

// Keeps the frames (and the matching per-frame targets) at
// SubsampleIndices. `targets` may be empty. Output fps is `target_fps`.
std::pair<FeatureSequence, std::vector<double>> Subsample(
    const FeatureSequence& seq, const std::vector<double>& targets,
    double target_fps);

// Picks `indices` out of a per-frame vector.
std::vector<double> Gather(const std::vector<double>& values,
                           const std::vector<std::size_t>& indices);

enum class BinarizeRule { kUserFraction, kScorePercentile };

// How a single user "marks" a frame under the user-fraction rule.
enum class MarkRule {
  kPositive,      // score > 0
  kAboveMedian,   // score >= that user's median score
};

struct ConsolidationConfig {
  BinarizeRule rule = BinarizeRule::kUserFraction;
  double user_fraction = 0.5;  // x in (0, 1]
  MarkRule mark = MarkRule::kPositive;
  double percentile = 0.85;    // sigma in (0, 1) for kScorePercentile
};

struct BinarizedTargets {
  std::string video_id;
  std::vector<double> labels;  // 0.0 or 1.0 per frame
  double threshold_used = 0.0;
  BinarizeRule rule = BinarizeRule::kUserFraction;
};

// Collapses multi-user scores into one 0/1 label per frame.
//
// kUserFraction: label 1 iff at least ceil(x * n_users) users mark the frame
// (threshold_used is that user count). kScorePercentile: label 1 iff the mean
// user score reaches the sigma-quantile of mean scores (nearest rank at index
// floor(sigma * T) of the ascending sort; threshold_used is that value).
BinarizedTargets ConsolidateTargets(const AnnotationSet& ann,
                                    const ConsolidationConfig& cfg);

// Fixed-length windows over a sequence. windows[k] covers frames
// [start_k, start_k + window_len) and is labelled with the target of its
// center frame start_k + window_len / 2.
struct SnippetBatch {
  std::vector<Mat> windows;  // each window_len x D
  std::vector<double> targets;
  std::vector<std::size_t> center_indices;
  std::size_t window_len = 0;
};

// Window start positions 0, stride, ... with start + window_len <= T.
std::vector<std::size_t> WindowStarts(std::size_t num_frames,
                                      std::size_t window_len,
                                      std::size_t stride);

// `targets` may be empty, in which case the batch carries no targets.
SnippetBatch MakeWindows(const Mat& frames, const std::vector<double>& targets,
                         std::size_t window_len, std::size_t stride);

}  // namespace vidsum

#endif  // VIDSUM_PREPROCESS_H_
