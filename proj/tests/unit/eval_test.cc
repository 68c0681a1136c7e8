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

#include <algorithm>
#include <filesystem>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.h"
#include "vidsum/errors.h"
#include "vidsum/eval.h"
#include "vidsum/rng.h"
#include "vidsum/synth.h"

namespace vidsum {
namespace {

namespace fs = std::filesystem;

std::vector<int> Range(std::size_t t, std::size_t a, std::size_t b) {
  std::vector<int> m(t, 0);
  for (std::size_t i = a; i < b; ++i) m[i] = 1;
  return m;
}

TEST(OverlapTest, Examples) {
  const auto gt = Range(20, 0, 10);
  EXPECT_EQ(OverlapMetrics(gt, gt).fscore, 100.0);
  EXPECT_EQ(OverlapMetrics(Range(20, 10, 20), gt).fscore, 0.0);
  const OverlapScores s = OverlapMetrics(Range(20, 5, 15), gt);
  EXPECT_NEAR(s.precision, 50.0, 1e-9);
  EXPECT_NEAR(s.recall, 50.0, 1e-9);
  EXPECT_NEAR(s.fscore, 50.0, 1e-9);
}

TEST(OverlapTest, EmptyAndErrors) {
  const OverlapScores s = OverlapMetrics(Range(5, 0, 0), Range(5, 0, 0));
  EXPECT_EQ(s.precision, 0.0);
  EXPECT_EQ(s.fscore, 0.0);
  EXPECT_THROW(OverlapMetrics(Range(5, 0, 1), Range(6, 0, 1)), ShapeError);
}

TEST(OverlapTest, DualityAndOracle) {
  SplitMix64 rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t t = 1 + rng.UniformInt(100);
    std::vector<int> a(t), b(t);
    for (std::size_t i = 0; i < t; ++i) {
      a[i] = rng.Uniform() < 0.3;
      b[i] = rng.Uniform() < 0.3;
    }
    const OverlapScores ab = OverlapMetrics(a, b);
    const OverlapScores ba = OverlapMetrics(b, a);
    EXPECT_EQ(ab.precision, ba.recall);
    EXPECT_EQ(ab.recall, ba.precision);
    EXPECT_EQ(ab.fscore, ba.fscore);
    const oracle::Prf o = oracle::Overlap(a, b);
    EXPECT_NEAR(ab.precision, o.p, 1e-9);
    EXPECT_NEAR(ab.recall, o.r, 1e-9);
    EXPECT_NEAR(ab.fscore, o.f, 1e-9);
  }
}

std::vector<std::string> Ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("v" + std::to_string(100 + i));
  return ids;
}

TEST(FoldsTest, EachVideoOnceBalanced) {
  const auto ids = Ids(23);
  const std::vector<std::optional<std::string>> none(23);
  const auto f = AssignFolds(ids, none, 5, false, 3);
  std::vector<int> count(5, 0);
  for (std::size_t k : f) ++count[k];
  for (int c : count) EXPECT_TRUE(c == 4 || c == 5);
  EXPECT_EQ(f, AssignFolds(ids, none, 5, false, 3));
}

TEST(FoldsTest, FiveVideosFiveFolds) {
  const auto f = AssignFolds(Ids(5), std::vector<std::optional<std::string>>(5), 5, false, 0);
  std::vector<std::size_t> sorted = f;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST(FoldsTest, InputOrderInvariant) {
  auto ids = Ids(12);
  const std::vector<std::optional<std::string>> none(12);
  const auto f = AssignFolds(ids, none, 4, false, 9);
  std::vector<std::size_t> perm(12);
  std::iota(perm.begin(), perm.end(), 0);
  SplitMix64 rng(2);
  Shuffle(perm, rng);
  std::vector<std::string> shuffled;
  for (std::size_t i : perm) shuffled.push_back(ids[i]);
  const auto g = AssignFolds(shuffled, none, 4, false, 9);
  for (std::size_t k = 0; k < 12; ++k) EXPECT_EQ(g[k], f[perm[k]]);
}

TEST(FoldsTest, StratifiedSpreadsCategories) {
  const auto ids = Ids(20);
  std::vector<std::optional<std::string>> cats;
  for (std::size_t i = 0; i < 20; ++i) cats.push_back("c" + std::to_string(i % 4));
  const auto f = AssignFolds(ids, cats, 5, true, 4);
  // Each category has 5 videos, one per fold.
  for (int c = 0; c < 4; ++c) {
    std::vector<int> seen(5, 0);
    for (std::size_t i = 0; i < 20; ++i) {
      if (i % 4 == static_cast<std::size_t>(c)) ++seen[f[i]];
    }
    for (int s : seen) EXPECT_EQ(s, 1);
  }
}

TEST(FoldsTest, TooManyFolds) {
  EXPECT_THROW(AssignFolds(Ids(3), std::vector<std::optional<std::string>>(3), 4, false, 0),
               ValueError);
}

class CrossvalTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "vidsum_eval_crossval";
    fs::remove_all(dir_);
    SynthSpec spec;
    spec.n_videos = 5;
    spec.t_min = 80;
    spec.t_max = 120;
    spec.dim = 8;
    spec.segments_min = 6;
    spec.segments_max = 10;
    spec.seed = 5;
    manifest_path_ = GenerateDataset(spec, dir_).manifest_path;
  }

  static RunConfig SmallConfig() {
    RunConfig cfg;
    cfg.folds = 5;
    cfg.epochs = 2;
    cfg.encdec_hidden = 16;
    cfg.latent_dim = 8;
    cfg.lstm_hidden = 4;
    cfg.conv_channels = 8;
    cfg.mlp_units = 8;
    cfg.seed = 11;
    return cfg;
  }

  static inline fs::path dir_;
  static inline fs::path manifest_path_;
};

TEST_F(CrossvalTest, EachVideoTestedOnceAndDeterministic) {
  const DatasetManifest m = ReadManifest(manifest_path_);
  const EvalReport a = Crossval(m, SmallConfig());
  ASSERT_EQ(a.per_video.size(), 5u);
  std::vector<std::size_t> folds;
  for (const auto& r : a.per_video) {
    folds.push_back(r.fold);
    EXPECT_GE(r.fscore, 0.0);
    EXPECT_LE(r.fscore, 100.0);
    EXPECT_LE(r.selected_frames, r.budget_frames);
  }
  std::sort(folds.begin(), folds.end());
  EXPECT_EQ(folds, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  const EvalReport b = Crossval(m, SmallConfig());
  EXPECT_EQ(ToJson(a).dump(), ToJson(b).dump());
}

TEST_F(CrossvalTest, ManifestOrderDoesNotMatter) {
  DatasetManifest m = ReadManifest(manifest_path_);
  const double f1 = Crossval(m, SmallConfig()).mean_fscore;
  std::reverse(m.entries.begin(), m.entries.end());
  EXPECT_EQ(Crossval(m, SmallConfig()).mean_fscore, f1);
}

TEST_F(CrossvalTest, TooManyFolds) {
  RunConfig cfg = SmallConfig();
  cfg.folds = 6;
  EXPECT_THROW(Crossval(ReadManifest(manifest_path_), cfg), ValueError);
}

TEST_F(CrossvalTest, ReportFormats) {
  RunConfig cfg = SmallConfig();
  cfg.variant = Variant::kBaseline;
  cfg.stream = StreamSelection::kFused;
  const EvalReport r = Crossval(ReadManifest(manifest_path_), cfg);
  const std::string table = FormatReportTable(r);
  EXPECT_NE(table.find("mean F"), std::string::npos);
  const auto j = ToJson(r);
  EXPECT_EQ(j["per_video"].size(), 5u);
  EXPECT_EQ(j["config"]["stream"], "fused");
  const std::string curve = FormatCurve(r.per_video[0]);
  EXPECT_EQ(static_cast<std::size_t>(std::count(curve.begin(), curve.end(), '\n')),
            r.per_video[0].n_frames);
}

}  // namespace
}  // namespace vidsum
