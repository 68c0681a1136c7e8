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

#include "vidsum/preprocess.h"

#include <algorithm>
#include <cmath>

#include "vidsum/errors.h"

namespace vidsum {

std::vector<std::size_t> SubsampleIndices(std::size_t num_frames, double fps,
                                          double target_fps) {
  if (!(target_fps > 0.0) || !std::isfinite(target_fps)) {
    throw ValueError("target fps must be positive");
  }
  if (target_fps > fps) {
    throw ValueError("target fps exceeds the sequence fps");
  }
  const double step = fps / target_fps;
  std::vector<std::size_t> idx;
  for (std::size_t k = 0;; ++k) {
    const double pos = std::round(static_cast<double>(k) * step);
    if (pos >= static_cast<double>(num_frames)) break;
    const auto i = static_cast<std::size_t>(pos);
    if (idx.empty() || idx.back() != i) idx.push_back(i);
  }
  return idx;
}

std::vector<double> Gather(const std::vector<double>& values,
                           const std::vector<std::size_t>& indices) {
  std::vector<double> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(values.at(i));
  return out;
}

std::pair<FeatureSequence, std::vector<double>> Subsample(
    const FeatureSequence& seq, const std::vector<double>& targets,
    double target_fps) {
  if (!targets.empty() && targets.size() != seq.num_frames()) {
    throw ShapeError("targets length differs from frame count");
  }
  // Same fps short-circuits so the operation is exactly the identity.
  if (static_cast<float>(target_fps) == seq.fps) {
    if (!(target_fps > 0.0)) throw ValueError("target fps must be positive");
    return {seq, targets};
  }
  const auto idx = SubsampleIndices(seq.num_frames(), seq.fps, target_fps);
  FeatureSequence out;
  out.video_id = seq.video_id;
  out.stream = seq.stream;
  out.fps = static_cast<float>(target_fps);
  out.frames.resize(static_cast<Eigen::Index>(idx.size()), seq.frames.cols());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    out.frames.row(k) = seq.frames.row(idx[k]);
  }
  return {std::move(out), targets.empty() ? targets : Gather(targets, idx)};
}

namespace {

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

BinarizedTargets ConsolidateTargets(const AnnotationSet& ann,
                                    const ConsolidationConfig& cfg) {
  if (ann.users.empty()) throw ValueError("annotation set has no users");
  for (const auto& u : ann.users) {
    if (u.size() != ann.n_frames) {
      throw ShapeError("user score vector length differs from n_frames");
    }
  }
  BinarizedTargets out;
  out.video_id = ann.video_id;
  out.rule = cfg.rule;
  out.labels.assign(ann.n_frames, 0.0);
  const std::size_t n_users = ann.users.size();

  if (cfg.rule == BinarizeRule::kUserFraction) {
    if (!(cfg.user_fraction > 0.0 && cfg.user_fraction <= 1.0)) {
      throw ValueError("user fraction must lie in (0, 1]");
    }
    const auto needed = static_cast<std::size_t>(
        std::ceil(cfg.user_fraction * static_cast<double>(n_users) - 1e-9));
    out.threshold_used = static_cast<double>(needed);
    std::vector<std::size_t> marks(ann.n_frames, 0);
    for (const auto& u : ann.users) {
      const double cut = cfg.mark == MarkRule::kAboveMedian ? Median(u) : 0.0;
      for (std::size_t m = 0; m < u.size(); ++m) {
        const bool marked =
            cfg.mark == MarkRule::kAboveMedian ? u[m] >= cut : u[m] > 0.0;
        if (marked) ++marks[m];
      }
    }
    for (std::size_t m = 0; m < ann.n_frames; ++m) {
      out.labels[m] = marks[m] >= needed ? 1.0 : 0.0;
    }
    return out;
  }

  if (!(cfg.percentile > 0.0 && cfg.percentile < 1.0)) {
    throw ValueError("score percentile must lie in (0, 1)");
  }
  std::vector<double> mean(ann.n_frames, 0.0);
  for (const auto& u : ann.users) {
    for (std::size_t m = 0; m < u.size(); ++m) mean[m] += u[m];
  }
  for (double& v : mean) v /= static_cast<double>(n_users);
  std::vector<double> sorted = mean;
  std::sort(sorted.begin(), sorted.end());
  const auto rank = std::min<std::size_t>(
      static_cast<std::size_t>(
          std::floor(cfg.percentile * static_cast<double>(sorted.size()) + 1e-9)),
      sorted.size() - 1);
  out.threshold_used = sorted[rank];
  for (std::size_t m = 0; m < mean.size(); ++m) {
    out.labels[m] = mean[m] >= out.threshold_used ? 1.0 : 0.0;
  }
  return out;
}

std::vector<std::size_t> WindowStarts(std::size_t num_frames,
                                      std::size_t window_len,
                                      std::size_t stride) {
  if (window_len == 0) throw ValueError("window length must be positive");
  if (stride == 0) throw ValueError("stride must be positive");
  if (window_len > num_frames) {
    throw ValueError("window length exceeds sequence length");
  }
  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + window_len <= num_frames; s += stride) {
    starts.push_back(s);
  }
  return starts;
}

SnippetBatch MakeWindows(const Mat& frames, const std::vector<double>& targets,
                         std::size_t window_len, std::size_t stride) {
  const auto t = static_cast<std::size_t>(frames.rows());
  if (!targets.empty() && targets.size() != t) {
    throw ShapeError("targets length differs from frame count");
  }
  SnippetBatch batch;
  batch.window_len = window_len;
  for (std::size_t s : WindowStarts(t, window_len, stride)) {
    const std::size_t center = s + window_len / 2;
    batch.windows.push_back(frames.middleRows(s, window_len));
    batch.center_indices.push_back(center);
    if (!targets.empty()) batch.targets.push_back(targets[center]);
  }
  return batch;
}

}  // namespace vidsum
