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

#include "vidsum/eval.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>

#include "vidsum/errors.h"
#include "vidsum/pipeline.h"
#include "vidsum/rng.h"
#include "vidsum/select.h"

namespace vidsum {

OverlapScores OverlapMetrics(std::span<const int> pred, std::span<const int> gt) {
  if (pred.size() != gt.size()) throw ShapeError("masks differ in length");
  std::size_t overlap = 0, n_pred = 0, n_gt = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if ((pred[i] != 0 && pred[i] != 1) || (gt[i] != 0 && gt[i] != 1)) {
      throw ValueError("masks must be binary");
    }
    n_pred += pred[i];
    n_gt += gt[i];
    overlap += pred[i] & gt[i];
  }
  OverlapScores s;
  s.precision = n_pred == 0 ? 0.0 : 100.0 * overlap / static_cast<double>(n_pred);
  s.recall = n_gt == 0 ? 0.0 : 100.0 * overlap / static_cast<double>(n_gt);
  const double sum = s.precision + s.recall;
  s.fscore = sum == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / sum;
  return s;
}

std::vector<std::size_t> AssignFolds(
    const std::vector<std::string>& ids,
    const std::vector<std::optional<std::string>>& categories,
    std::size_t folds, bool stratify, std::uint64_t seed) {
  const std::size_t n = ids.size();
  if (folds == 0) throw ValueError("folds must be positive");
  if (folds > n) {
    throw ValueError("cannot make " + std::to_string(folds) + " folds from " +
                     std::to_string(n) + " videos");
  }
  if (categories.size() != n) throw ShapeError("one category slot per id");

  // Canonical order first, then a seeded shuffle.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  SplitMix64 rng(DeriveSeed(seed, "folds"));
  Shuffle(order, rng);

  std::vector<std::size_t> fold(n, 0);
  const bool have_categories =
      std::any_of(categories.begin(), categories.end(),
                  [](const auto& c) { return c.has_value(); });
  if (!stratify || !have_categories) {
    for (std::size_t k = 0; k < n; ++k) fold[order[k]] = k % folds;
    return fold;
  }
  // Group by category in order of first appearance in the shuffled list and
  // deal the groups round-robin with one running counter.
  std::vector<std::string> cat_order;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t idx : order) {
    const std::string c = categories[idx].value_or("");
    if (!groups.count(c)) cat_order.push_back(c);
    groups[c].push_back(idx);
  }
  std::size_t counter = 0;
  for (const std::string& c : cat_order) {
    for (std::size_t idx : groups[c]) fold[idx] = counter++ % folds;
  }
  return fold;
}

EvalReport Crossval(const DatasetManifest& manifest, const RunConfig& cfg,
                    const ProgressFn& progress) {
  Validate(cfg);
  std::vector<ManifestEntry> entries = manifest.entries;
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.video_id < b.video_id; });
  if (cfg.folds > entries.size()) {
    throw ValueError("more folds than videos");
  }
  auto note = [&](const std::string& msg) {
    if (progress) progress(msg);
  };

  const bool need_flow = cfg.stream != StreamSelection::kRgb ||
                         cfg.kts_stream == Stream::kFlow;
  std::vector<PreparedVideo> videos;
  for (const auto& e : entries) {
    videos.push_back(PrepareVideo(manifest, e, cfg, need_flow));
  }
  std::vector<std::string> ids;
  std::vector<std::optional<std::string>> cats;
  for (const auto& v : videos) {
    ids.push_back(v.video_id);
    cats.push_back(v.category);
  }
  const std::vector<std::size_t> fold_of =
      AssignFolds(ids, cats, cfg.folds, cfg.stratify, cfg.seed);

  std::vector<Stream> streams;
  if (cfg.stream != StreamSelection::kFlow) streams.push_back(Stream::kRgb);
  if (cfg.stream != StreamSelection::kRgb) streams.push_back(Stream::kFlow);

  EvalReport report;
  report.config = cfg;
  report.folds.assign(cfg.folds, {});
  for (std::size_t i = 0; i < videos.size(); ++i) {
    report.folds[fold_of[i]].push_back(videos[i].video_id);
  }

  for (std::size_t f = 0; f < cfg.folds; ++f) {
    std::vector<const PreparedVideo*> train;
    std::vector<const PreparedVideo*> test;
    for (std::size_t i = 0; i < videos.size(); ++i) {
      (fold_of[i] == f ? test : train).push_back(&videos[i]);
    }
    std::vector<StreamModel> models;
    for (Stream s : streams) {
      note("fold " + std::to_string(f + 1) + "/" + std::to_string(cfg.folds) +
           ": training " + std::string(ToString(cfg.variant)) + " on " +
           std::string(ToString(s)) + " (" + std::to_string(train.size()) +
           " videos)");
      models.push_back(TrainStreamModel(
          train, s, cfg, DeriveSeed(cfg.seed, ToString(s), f)));
    }
    std::vector<const StreamModel*> model_ptrs;
    for (const auto& m : models) model_ptrs.push_back(&m);

    for (const PreparedVideo* v : test) {
      const ScoreVector scores = ScoreWithModels(model_ptrs, *v);
      const Segmentation seg = SegmentVideo(*v, cfg);
      const Summary summary = Summarize(scores, seg, cfg.budget, cfg.shot_value);
      const std::vector<int> pmask = BinarizePercentile(scores, cfg.percentile);
      std::vector<int> gt(v->targets.size());
      for (std::size_t i = 0; i < gt.size(); ++i) gt[i] = v->targets[i] > 0.5;

      VideoResult r;
      r.video_id = v->video_id;
      r.category = v->category;
      r.fold = f;
      r.n_frames = gt.size();
      r.budget_frames = summary.budget_frames;
      r.selected_frames = summary.selected_frames;
      r.summary_fraction =
          static_cast<double>(summary.selected_frames) / static_cast<double>(gt.size());
      r.knapsack = OverlapMetrics(summary.frame_mask, gt);
      r.percentile = OverlapMetrics(pmask, gt);
      r.fscore = cfg.eval_mask == EvalMask::kKnapsack ? r.knapsack.fscore
                                                      : r.percentile.fscore;
      r.scores = scores.scores;
      r.gt = std::move(gt);
      report.per_video.push_back(std::move(r));
    }
  }
  std::sort(report.per_video.begin(), report.per_video.end(),
            [](const auto& a, const auto& b) { return a.video_id < b.video_id; });
  const double n = static_cast<double>(report.per_video.size());
  for (const auto& r : report.per_video) {
    report.mean_fscore += r.fscore / n;
    report.mean_knapsack_fscore += r.knapsack.fscore / n;
    report.mean_percentile_fscore += r.percentile.fscore / n;
  }
  return report;
}

nlohmann::json ToJson(const EvalReport& report) {
  using nlohmann::json;
  json j;
  j["config"] = ToJson(report.config);
  j["aggregate"] = {{"mean_fscore", report.mean_fscore},
                    {"mean_knapsack_fscore", report.mean_knapsack_fscore},
                    {"mean_percentile_fscore", report.mean_percentile_fscore}};
  j["folds"] = report.folds;
  json per = json::array();
  for (const auto& r : report.per_video) {
    json o;
    o["video_id"] = r.video_id;
    o["category"] = r.category ? json(*r.category) : json(nullptr);
    o["fold"] = r.fold;
    o["n_frames"] = r.n_frames;
    o["budget_frames"] = r.budget_frames;
    o["selected_frames"] = r.selected_frames;
    o["summary_fraction"] = r.summary_fraction;
    o["precision"] = r.knapsack.precision;
    o["recall"] = r.knapsack.recall;
    o["fscore"] = r.fscore;
    o["knapsack_fscore"] = r.knapsack.fscore;
    o["percentile_precision"] = r.percentile.precision;
    o["percentile_recall"] = r.percentile.recall;
    o["percentile_fscore"] = r.percentile.fscore;
    per.push_back(std::move(o));
  }
  j["per_video"] = std::move(per);
  return j;
}

std::string FormatReportTable(const EvalReport& report) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %4s %6s %6s %8s %8s %8s %8s\n",
                "video", "fold", "frames", "sel", "prec", "recall", "F",
                "F_pct");
  out += line;
  for (const auto& r : report.per_video) {
    std::snprintf(line, sizeof(line), "%-12s %4zu %6zu %6zu %8.2f %8.2f %8.2f %8.2f\n",
                  r.video_id.c_str(), r.fold + 1, r.n_frames, r.selected_frames,
                  r.knapsack.precision, r.knapsack.recall, r.fscore,
                  r.percentile.fscore);
    out += line;
  }
  std::snprintf(line, sizeof(line),
                "mean F %.2f  (key-shot %.2f, percentile %.2f) over %zu videos\n",
                report.mean_fscore, report.mean_knapsack_fscore,
                report.mean_percentile_fscore, report.per_video.size());
  out += line;
  return out;
}

std::string FormatCurve(const VideoResult& r) {
  std::string out;
  char line[64];
  for (std::size_t i = 0; i < r.scores.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.17g %d\n", r.scores[i], r.gt[i]);
    out += line;
  }
  return out;
}

}  // namespace vidsum
