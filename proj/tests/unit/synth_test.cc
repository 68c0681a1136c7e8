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
#include <filesystem>

#include <gtest/gtest.h>

#include "vidsum/dataio.h"
#include "vidsum/errors.h"
#include "vidsum/kts.h"
#include "vidsum/pipeline.h"
#include "vidsum/synth.h"

namespace vidsum {
namespace {

namespace fs = std::filesystem;

SynthSpec Small() {
  SynthSpec s;
  s.n_videos = 3;
  s.t_min = 100;
  s.t_max = 140;
  s.dim = 16;
  s.segments_min = 8;
  s.segments_max = 12;
  s.seed = 21;
  return s;
}

TEST(SynthTest, VideoIsDeterministic) {
  const SynthVideo a = GenerateVideo(Small(), 1);
  const SynthVideo b = GenerateVideo(Small(), 1);
  EXPECT_EQ(EncodeFeatures(a.rgb), EncodeFeatures(b.rgb));
  EXPECT_EQ(EncodeFeatures(a.flow), EncodeFeatures(b.flow));
  EXPECT_EQ(FormatAnnotations(a.annotations), FormatAnnotations(b.annotations));
  const SynthVideo c = GenerateVideo(Small(), 2);
  EXPECT_NE(EncodeFeatures(a.rgb), EncodeFeatures(c.rgb));
}

TEST(SynthTest, DatasetFilesAreByteIdentical) {
  const fs::path a = fs::temp_directory_path() / "vidsum_synth_a";
  const fs::path b = fs::temp_directory_path() / "vidsum_synth_b";
  fs::remove_all(a);
  fs::remove_all(b);
  GenerateDataset(Small(), a);
  GenerateDataset(Small(), b);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    const fs::path name = e.path().filename();
    EXPECT_EQ(Sha256Hex(ReadFileBytes(a / name)), Sha256Hex(ReadFileBytes(b / name)))
        << name;
    ++files;
  }
  // 3 videos x (rgb, flow, annotations) + manifest + planted truth.
  EXPECT_EQ(files, 11u);
  const DatasetManifest m = ReadManifest(a / "manifest.json");
  EXPECT_NO_THROW(Validate(m, true));
}

TEST(SynthTest, OutputsPassValidators) {
  SynthSpec s = Small();
  s.n_categories = 2;
  for (std::size_t i = 0; i < s.n_videos; ++i) {
    const SynthVideo v = GenerateVideo(s, i);
    EXPECT_NO_THROW(Validate(v.rgb));
    EXPECT_NO_THROW(Validate(v.flow));
    EXPECT_NO_THROW(Validate(v.annotations));
    EXPECT_EQ(v.annotations.users.size(), s.n_users);
    EXPECT_EQ(static_cast<std::size_t>(v.rgb.frames.rows()), v.truth.n_frames);
    EXPECT_GE(v.truth.n_frames, s.t_min);
    EXPECT_LE(v.truth.n_frames, s.t_max);
    EXPECT_EQ(v.category, "cat" + std::to_string(i % 2));
    EXPECT_GE(v.flow.frames.minCoeff(), 0.0f);
    EXPECT_LE(v.flow.frames.maxCoeff(), 1.0f);
  }
}

TEST(SynthTest, NoFlowLeavesStreamEmpty) {
  SynthSpec s = Small();
  s.with_flow = false;
  EXPECT_EQ(GenerateVideo(s, 0).flow.frames.size(), 0);
}

TEST(SynthTest, PlantedFractionNearTarget) {
  const SynthSpec s = Small();
  for (std::size_t i = 0; i < s.n_videos; ++i) {
    const PlantedTruth t = GenerateVideo(s, i).truth;
    std::size_t ones = 0;
    for (int x : t.summary_mask) ones += x;
    const double frac = static_cast<double>(ones) / t.n_frames;
    EXPECT_LE(frac, s.summary_fraction + 1e-12);
    EXPECT_GT(frac, 0.5 * s.summary_fraction);
  }
}

TEST(SynthTest, NoiselessUsersMatchPlantedMask) {
  SynthSpec s = Small();
  s.user_noise = 0.0;
  const SynthVideo v = GenerateVideo(s, 0);
  for (const auto& u : v.annotations.users) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      EXPECT_EQ(u[i], static_cast<double>(v.truth.summary_mask[i]));
    }
  }
}

TEST(SynthTest, NoiselessFeaturesGiveExactBoundaries) {
  SynthSpec s = Small();
  s.feature_noise = 0.0;
  for (std::size_t i = 0; i < s.n_videos; ++i) {
    const SynthVideo v = GenerateVideo(s, i);
    KtsConfig cfg;
    cfg.penalty = 0.01;
    const Segmentation seg = Segment(v.rgb.frames.cast<double>(), s.fps, cfg);
    EXPECT_EQ(seg.change_points, v.truth.change_points);
  }
}

TEST(SynthTest, RejectsBadSpecs) {
  SynthSpec s = Small();
  s.t_min = 200;
  EXPECT_THROW(Validate(s), ValueError);
  s = Small();
  s.summary_fraction = 1.0;
  EXPECT_THROW(Validate(s), ValueError);
  s = Small();
  s.segments_max = 40;
  EXPECT_THROW(Validate(s), ValueError);
  s = Small();
  s.user_noise = 1.5;
  EXPECT_THROW(Validate(s), ValueError);
}

TEST(SynthTest, PiecewiseConstantShape) {
  const Mat m = PiecewiseConstant({3, 4, 5}, 6, 0.0, 1);
  ASSERT_EQ(m.rows(), 12);
  ASSERT_EQ(m.cols(), 6);
  EXPECT_EQ(m.row(0), m.row(2));
  EXPECT_NE(m.row(2), m.row(3));
}

}  // namespace
}  // namespace vidsum
