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

#ifndef VIDSUM_SELECT_H_
#define VIDSUM_SELECT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vidsum/kts.h"
#include "vidsum/scorer.h"

namespace vidsum {

// Mean frame score inside each segment.
std::vector<double> IntervalScores(const ScoreVector& scores,
                                   const Segmentation& seg);

// Exact 0/1 knapsack by dynamic programming over integer capacity.
// Returns the selected item indices in increasing order. Items are scanned in
// index order; on equal value the reconstruction prefers leaving an item out.
std::vector<std::size_t> KnapsackSelect(const std::vector<double>& values,
                                        const std::vector<std::size_t>& weights,
                                        std::size_t capacity);

enum class ShotValue {
  kMean,         // mean segment score
  kMeanTimesLength,
};

struct Summary {
  std::string video_id;
  std::vector<std::pair<std::size_t, std::size_t>> shots;  // [start, end)
  std::size_t budget_frames = 0;
  std::size_t selected_frames = 0;
  std::vector<int> frame_mask;

  bool operator==(const Summary&) const = default;
};

// Capacity in frames for a budget fraction: floor(fraction * T).
std::size_t BudgetFrames(double fraction, std::size_t num_frames);

// Key-shot summary: segments are knapsack items with weight = length and
// value = interval score; capacity = BudgetFrames(budget_fraction, T).
Summary Summarize(const ScoreVector& scores, const Segmentation& seg,
                  double budget_fraction, ShotValue value = ShotValue::kMean);

// Frame mask of scores >= the q-quantile, where the quantile is the value at
// index floor(q * T) of the ascending sort. With distinct scores this keeps
// T - floor(q * T) = ceil((1 - q) * T) frames.
std::vector<int> BinarizePercentile(const ScoreVector& scores, double q);

// JSON export {video_id, shots, budget_frames, selected_frames}.
std::string FormatSummaryJson(const Summary& s);
Summary ParseSummaryJson(std::string_view text, std::size_t num_frames);

// Mask as one line of '0'/'1' characters.
std::string FormatMask(const std::vector<int>& mask);
std::vector<int> ParseMask(std::string_view text);

}  // namespace vidsum

#endif  // VIDSUM_SELECT_H_
