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

#include "vidsum/select.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "vidsum/errors.h"

namespace vidsum {

std::vector<double> IntervalScores(const ScoreVector& scores,
                                   const Segmentation& seg) {
  if (scores.scores.size() != seg.n_frames) {
    throw ShapeError("score vector and segmentation lengths differ");
  }
  std::vector<double> out;
  for (const auto& [a, b] : seg.Segments()) {
    double sum = 0.0;
    for (std::size_t i = a; i < b; ++i) sum += scores.scores[i];
    out.push_back(sum / static_cast<double>(b - a));
  }
  return out;
}

std::vector<std::size_t> KnapsackSelect(const std::vector<double>& values,
                                        const std::vector<std::size_t>& weights,
                                        std::size_t capacity) {
  if (values.size() != weights.size()) {
    throw ShapeError("values and weights differ in length");
  }
  const std::size_t n = values.size();
  for (std::size_t w : weights) {
    if (w == 0) throw ValueError("knapsack weights must be at least 1");
  }
  // best[i][c]: optimum over items [0, i) within capacity c.
  std::vector<std::vector<double>> best(n + 1,
                                        std::vector<double>(capacity + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t w = weights[i];
    for (std::size_t c = 0; c <= capacity; ++c) {
      double v = best[i][c];
      if (w <= c) v = std::max(v, best[i][c - w] + values[i]);
      best[i + 1][c] = v;
    }
  }
  std::vector<std::size_t> chosen;
  std::size_t c = capacity;
  for (std::size_t i = n; i-- > 0;) {
    if (best[i + 1][c] != best[i][c]) {
      chosen.push_back(i);
      c -= weights[i];
    }
  }
  std::reverse(chosen.begin(), chosen.end());
  return chosen;
}

std::size_t BudgetFrames(double fraction, std::size_t num_frames) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ValueError("budget fraction must lie in (0, 1]");
  }
  // The epsilon keeps products like 0.15 * 100 from rounding below 15.
  return static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(num_frames) + 1e-9));
}

Summary Summarize(const ScoreVector& scores, const Segmentation& seg,
                  double budget_fraction, ShotValue value) {
  Summary s;
  s.video_id = scores.video_id;
  s.budget_frames = BudgetFrames(budget_fraction, seg.n_frames);
  const auto segments = seg.Segments();
  std::vector<double> values = IntervalScores(scores, seg);
  std::vector<std::size_t> weights;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    weights.push_back(segments[k].second - segments[k].first);
    if (value == ShotValue::kMeanTimesLength) {
      values[k] *= static_cast<double>(weights.back());
    }
  }
  s.frame_mask.assign(seg.n_frames, 0);
  for (std::size_t k : KnapsackSelect(values, weights, s.budget_frames)) {
    s.shots.push_back(segments[k]);
    s.selected_frames += weights[k];
    for (std::size_t i = segments[k].first; i < segments[k].second; ++i) {
      s.frame_mask[i] = 1;
    }
  }
  return s;
}

std::vector<int> BinarizePercentile(const ScoreVector& scores, double q) {
  if (!(q > 0.0 && q < 1.0)) throw ValueError("percentile must lie in (0, 1)");
  const std::size_t n = scores.scores.size();
  if (n == 0) return {};
  std::vector<double> sorted = scores.scores;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t rank = std::min(
      static_cast<std::size_t>(std::floor(q * static_cast<double>(n) + 1e-9)),
      n - 1);
  const double threshold = sorted[rank];
  std::vector<int> mask(n, 0);
  for (std::size_t i = 0; i < n; ++i) mask[i] = scores.scores[i] >= threshold;
  return mask;
}

std::string FormatSummaryJson(const Summary& s) {
  nlohmann::json j;
  j["video_id"] = s.video_id;
  j["shots"] = nlohmann::json::array();
  for (const auto& [a, b] : s.shots) j["shots"].push_back({a, b});
  j["budget_frames"] = s.budget_frames;
  j["selected_frames"] = s.selected_frames;
  return j.dump();
}

Summary ParseSummaryJson(std::string_view text, std::size_t num_frames) {
  Summary s;
  try {
    const auto j = nlohmann::json::parse(text.begin(), text.end());
    s.video_id = j.at("video_id").get<std::string>();
    s.budget_frames = j.at("budget_frames").get<std::size_t>();
    for (const auto& shot : j.at("shots")) {
      const auto v = shot.get<std::vector<std::size_t>>();
      if (v.size() != 2) throw FormatError("a shot needs [start, end)");
      s.shots.emplace_back(v[0], v[1]);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("summary json: ") + e.what());
  }
  s.frame_mask.assign(num_frames, 0);
  std::size_t prev_end = 0;
  for (const auto& [a, b] : s.shots) {
    if (a >= b || b > num_frames || a < prev_end) {
      throw ValueError("shots must be sorted, disjoint and inside the video");
    }
    prev_end = b;
    s.selected_frames += b - a;
    for (std::size_t i = a; i < b; ++i) s.frame_mask[i] = 1;
  }
  return s;
}

std::string FormatMask(const std::vector<int>& mask) {
  std::string out;
  out.reserve(mask.size() + 1);
  for (int m : mask) out.push_back(m ? '1' : '0');
  out.push_back('\n');
  return out;
}

std::vector<int> ParseMask(std::string_view text) {
  std::vector<int> mask;
  for (char c : text) {
    if (c == '0' || c == '1') {
      mask.push_back(c - '0');
    } else if (c != '\n' && c != '\r' && c != ' ') {
      throw FormatError("mask may only contain '0' and '1'");
    }
  }
  return mask;
}

}  // namespace vidsum
