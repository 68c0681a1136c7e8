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

#include <cmath>

#include <gtest/gtest.h>

#include "vidsum/errors.h"
#include "vidsum/rng.h"
#include "vidsum/scorer.h"

namespace vidsum {
namespace {

ScorerConfig Small(Variant v) {
  ScorerConfig cfg;
  cfg.variant = v;
  cfg.lstm_hidden = 6;
  cfg.conv_channels = 8;
  cfg.mlp_units = 8;
  cfg.train.epochs = 8;
  cfg.train.seed = 4;
  return cfg;
}

// Scorer whose output is the constant p for every window.
ScorerModel ConstantModel(double p, std::size_t window_len) {
  ScorerConfig cfg = Small(Variant::kBaseline);
  cfg.window_len = window_len;
  ScorerModel m = MakeScorer(cfg, 3, 1);
  auto& params = m.net.params();
  params[params.size() - 2].value.setZero();
  params.back().value.setConstant(std::log(p / (1.0 - p)));
  return m;
}

Mat RandomMat(Eigen::Index r, Eigen::Index c, SplitMix64& rng) {
  Mat m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.Normal();
  return m;
}

TEST(ScorerLayersTest, VariantStacks) {
  const auto base = ScorerLayers(ScorerConfig{.variant = Variant::kBaseline}, 64);
  ASSERT_EQ(base.size(), 3u);
  EXPECT_EQ(base[0].out_dim, 256u);
  EXPECT_EQ(base[0].activation, Activation::kSigmoid);
  const auto sn = ScorerLayers(ScorerConfig{.variant = Variant::kSummaryNet}, 512);
  ASSERT_EQ(sn.size(), 6u);
  EXPECT_EQ(sn[0].kind, LayerKind::kLstm);
  EXPECT_TRUE(sn[0].bidirectional);
  EXPECT_EQ(sn[0].out_dim, 128u);
  EXPECT_EQ(sn[1].kind, LayerKind::kConv1D);
  EXPECT_EQ(sn[4].kind, LayerKind::kConv1D);
  EXPECT_EQ(sn.back().out_dim, 1u);
  EXPECT_EQ(sn.back().activation, Activation::kSigmoid);
  const auto cn = ScorerLayers(ScorerConfig{.variant = Variant::kConvNet}, 64);
  EXPECT_EQ(cn.size(), 5u);
  EXPECT_EQ(cn[0].kind, LayerKind::kConv1D);
  EXPECT_EQ(ScorerLayers(ScorerConfig{.variant = Variant::kConvLstm}, 64).size(), 6u);
}

TEST(ScoreVideoTest, ConstantOutputEdges) {
  for (std::size_t w : {1u, 4u, 5u}) {
    const ScorerModel m = ConstantModel(0.7, w);
    const ScoreVector s = ScoreVideo(m, Mat::Zero(12, 3), "c");
    const std::size_t lead = w / 2, trail = w - 1 - w / 2;
    for (std::size_t i = 0; i < 12; ++i) {
      const bool covered = i >= lead && i < 12 - trail;
      EXPECT_NEAR(s.scores[i], covered ? 0.7 : 0.0, 1e-12) << w << " " << i;
    }
    EXPECT_EQ(s.first_scored, lead);
    EXPECT_EQ(s.last_scored, 11 - trail);
  }
}

TEST(ScoreVideoTest, SingleWindow) {
  const ScorerModel m = ConstantModel(0.6, 5);
  const ScoreVector s = ScoreVideo(m, Mat::Zero(5, 3), "c");
  int nonzero = 0;
  for (double x : s.scores) nonzero += x != 0.0;
  EXPECT_EQ(nonzero, 1);
  EXPECT_NE(s.scores[2], 0.0);
}

TEST(ScoreVideoTest, TooShort) {
  EXPECT_THROW(ScoreVideo(ConstantModel(0.5, 5), Mat::Zero(4, 3), "c"), ValueError);
}

TEST(ScoreVideoTest, BatchPartitionInvariant) {
  SplitMix64 rng(2);
  ScorerModel m = MakeScorer(Small(Variant::kSummaryNet), 3, 9);
  const Mat x = RandomMat(40, 3, rng);
  const ScoreVector ref = ScoreVideo(m, x, "v", 0, 1, 1);
  for (std::size_t b : {2u, 7u, 36u, 64u}) {
    const ScoreVector s = ScoreVideo(m, x, "v", 0, 1, b);
    for (std::size_t i = 0; i < ref.scores.size(); ++i) {
      EXPECT_NEAR(s.scores[i], ref.scores[i], 1e-12) << b;
    }
  }
}

TEST(ScoreVideoTest, ScoresInUnitInterval) {
  SplitMix64 rng(3);
  for (Variant v : {Variant::kBaseline, Variant::kConvNet, Variant::kSummaryNet}) {
    const ScorerModel m = MakeScorer(Small(v), 4, 5);
    const ScoreVector s = ScoreVideo(m, RandomMat(30, 4, rng) * 10.0, "v");
    for (double x : s.scores) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
  }
}

ScoreVector Scores(std::string id, std::vector<double> s) {
  ScoreVector v;
  v.video_id = std::move(id);
  v.last_scored = s.size() - 1;
  v.scores = std::move(s);
  return v;
}

TEST(FuseTest, Arithmetic) {
  const ScoreVector f = FuseStreams(Scores("a", {0.2, 0.2}), Scores("a", {0.8, 0.8}));
  EXPECT_EQ(f.scores, (std::vector<double>{0.5, 0.5}));
}

TEST(FuseTest, CommutativeAndIdempotent) {
  SplitMix64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(10), b(10);
    for (std::size_t i = 0; i < 10; ++i) {
      a[i] = rng.Uniform();
      b[i] = rng.Uniform();
    }
    EXPECT_EQ(FuseStreams(Scores("x", a), Scores("x", b)),
              FuseStreams(Scores("x", b), Scores("x", a)));
    EXPECT_EQ(FuseStreams(Scores("x", a), Scores("x", a)), Scores("x", a));
  }
}

TEST(FuseTest, Errors) {
  EXPECT_THROW(FuseStreams(Scores("a", {0.1}), Scores("b", {0.1})), IdMismatchError);
  EXPECT_THROW(FuseStreams(Scores("a", {0.1}), Scores("a", {0.1, 0.2})), ShapeError);
}

TEST(ScoreFilesTest, RoundTrip) {
  SplitMix64 rng(7);
  ScoreVector s = Scores("vid", std::vector<double>(25));
  for (double& x : s.scores) x = rng.Uniform();
  s.first_scored = 2;
  s.last_scored = 22;
  EXPECT_EQ(ParseScores(FormatScores(s)), s);
  EXPECT_EQ(ParseScoresJson(FormatScoresJson(s)), s);
}

// Frames with feature[0] > 0.8 are summaries.
std::vector<LabeledSequence> PlantedThreshold(std::uint64_t seed, std::size_t n) {
  SplitMix64 rng(seed);
  std::vector<LabeledSequence> out;
  for (std::size_t v = 0; v < n; ++v) {
    LabeledSequence s;
    s.video_id = "v" + std::to_string(v);
    s.features = Mat(60, 3);
    for (Eigen::Index i = 0; i < s.features.size(); ++i) s.features.data()[i] = rng.Uniform();
    for (Eigen::Index t = 0; t < 60; ++t) s.targets.push_back(s.features(t, 0) > 0.8 ? 1.0 : 0.0);
    out.push_back(std::move(s));
  }
  return out;
}

TEST(TrainScorerTest, SummaryNetSeparatesPlantedThreshold) {
  ScorerConfig cfg = Small(Variant::kSummaryNet);
  cfg.train.epochs = 25;
  cfg.train.adam.lr = 5e-3;
  const ScorerModel m = TrainScorer(PlantedThreshold(1, 8), PlantedThreshold(2, 2), cfg);
  EXPECT_LT(m.meta.best_val_loss, 0.3);
}

TEST(TrainScorerTest, ZeroEpochsGivesInitializedModel) {
  ScorerConfig cfg = Small(Variant::kConvLstm);
  cfg.train.epochs = 0;
  const ScorerModel m = TrainScorer(PlantedThreshold(1, 3), PlantedThreshold(2, 1), cfg);
  EXPECT_EQ(m.net.ExportWeights(), MakeScorer(cfg, 3, cfg.train.seed).net.ExportWeights());
}

TEST(TrainScorerTest, IdenticalSplitsGiveEqualLosses) {
  ScorerConfig cfg = Small(Variant::kBaseline);
  const auto data = PlantedThreshold(3, 3);
  const ScorerModel m = TrainScorer(data, data, cfg);
  EXPECT_NEAR(m.meta.best_val_loss, m.final_train_loss, 1e-9);
}

TEST(TrainScorerTest, EmptySplitRejected) {
  EXPECT_THROW(TrainScorer({}, PlantedThreshold(1, 1), Small(Variant::kBaseline)), ValueError);
  EXPECT_THROW(TrainScorer(PlantedThreshold(1, 1), {}, Small(Variant::kBaseline)), ValueError);
  EXPECT_THROW(TrainScorer(PlantedThreshold(1, 1), Small(Variant::kBaseline)), ValueError);
}

TEST(ScorerBundleTest, RoundTrip) {
  const ScorerModel m = MakeScorer(Small(Variant::kSummaryNet), 3, 2);
  const ScorerModel r = ScorerFromBundle(DecodeModel(EncodeModel(ToBundle(m, Stream::kRgb))));
  SplitMix64 rng(8);
  const Mat x = RandomMat(12, 3, rng);
  EXPECT_EQ(ScoreVideo(r, x, "v"), ScoreVideo(m, x, "v"));
  EXPECT_EQ(r.cfg.variant, Variant::kSummaryNet);
}

}  // namespace
}  // namespace vidsum
