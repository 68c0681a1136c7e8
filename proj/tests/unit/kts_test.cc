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
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.h"
#include "vidsum/errors.h"
#include "vidsum/kts.h"
#include "vidsum/rng.h"
#include "vidsum/synth.h"

namespace vidsum {
namespace {

Mat RandomMat(Eigen::Index r, Eigen::Index c, SplitMix64& rng) {
  Mat m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.Normal();
  return m;
}

TEST(GramTest, IdenticalUnitFramesGiveOnes) {
  Mat f = Mat::Zero(4, 3);
  f.col(1).setOnes();
  EXPECT_TRUE(GramMatrix(f, {}).isApprox(Mat::Ones(4, 4)));
}

TEST(GramTest, OrthonormalFramesGiveIdentity) {
  EXPECT_TRUE(GramMatrix(Mat::Identity(5, 5), {}).isApprox(Mat::Identity(5, 5)));
}

TEST(GramTest, RbfDiagonalIsOne) {
  SplitMix64 rng(1);
  const Mat k = GramMatrix(RandomMat(9, 4, rng), {KernelKind::kRbf, 0.3, false});
  for (int i = 0; i < 9; ++i) EXPECT_EQ(k(i, i), 1.0);
}

TEST(ScatterTest, MatchesDirectSumAndNonNegative) {
  SplitMix64 rng(2);
  for (KernelSpec spec : {KernelSpec{}, KernelSpec{KernelKind::kRbf, 0.5, true}}) {
    const Mat k = GramMatrix(RandomMat(15, 3, rng), spec);
    const ScatterTable table(k);
    for (std::size_t a = 0; a < 15; ++a) {
      for (std::size_t b = a + 1; b <= 15; ++b) {
        EXPECT_NEAR(table.Scatter(a, b), oracle::Scatter(k, a, b), 1e-10);
        EXPECT_GE(table.Scatter(a, b), -1e-9);
      }
    }
  }
}

TEST(SolveTest, MatchesBruteForceForSmallT) {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t t = 2 + rng.UniformInt(11);  // up to 12
    const Mat k = GramMatrix(RandomMat(static_cast<Eigen::Index>(t), 3, rng), {});
    const KtsTable table = SolveKts(ScatterTable(k), std::nullopt, t);
    for (std::size_t m = 1; m <= t; ++m) {
      EXPECT_NEAR(table.costs[m], oracle::KtsBest(k, m), 1e-9) << t << " " << m;
    }
  }
}

TEST(SolveTest, BoundariesReproduceCost) {
  SplitMix64 rng(4);
  const Mat k = GramMatrix(RandomMat(30, 4, rng), {});
  const ScatterTable s(k);
  const KtsTable table = SolveKts(s, 6, 30);
  for (std::size_t m = 5; m <= 30; ++m) {
    const auto& cps = table.boundaries[m];
    ASSERT_EQ(cps.size(), m - 1);
    double cost = 0.0;
    std::size_t start = 0;
    for (std::size_t cp : cps) {
      EXPECT_LE(cp - start, 6u);
      cost += oracle::Scatter(k, start, cp);
      start = cp;
    }
    EXPECT_LE(30 - start, 6u);
    cost += oracle::Scatter(k, start, 30);
    EXPECT_NEAR(cost, table.costs[m], 1e-9);
  }
  // Fewer than ceil(30 / 6) segments cannot respect the cap.
  EXPECT_TRUE(std::isinf(table.costs[4]));
}

TEST(SegmentTest, ConstantFeatures) {
  const Segmentation seg = Segment(Mat::Ones(40, 3), 2.0, {}, "c");
  EXPECT_TRUE(seg.change_points.empty());
  EXPECT_EQ(seg.n_frames, 40u);
}

TEST(SegmentTest, OrthogonalBlocks) {
  Mat f = Mat::Zero(200, 4);
  for (int b = 0; b < 4; ++b) f.block(50 * b, b, 50, 1).setOnes();
  KtsConfig cfg;
  cfg.penalty = 0.01;
  EXPECT_EQ(Segment(f, 2.0, cfg).change_points, (std::vector<std::size_t>{50, 100, 150}));
}

TEST(SegmentTest, CapForcesShortSegments) {
  SplitMix64 rng(5);
  KtsConfig cfg;
  cfg.max_seg_frames = 3;
  const Segmentation seg = Segment(RandomMat(10, 2, rng), 1.0, cfg);
  const auto segs = seg.Segments();
  EXPECT_GE(segs.size(), 4u);
  for (auto [a, b] : segs) EXPECT_LE(b - a, 3u);
}

TEST(SegmentTest, DimensionPermutationInvariance) {
  SplitMix64 rng(6);
  const Mat f = PiecewiseConstant({12, 20, 9, 30}, 6, 0.2, 77);
  std::vector<int> perm(6);
  std::iota(perm.begin(), perm.end(), 0);
  for (int trial = 0; trial < 10; ++trial) {
    Shuffle(perm, rng);
    Mat g(f.rows(), f.cols());
    for (int d = 0; d < 6; ++d) g.col(d) = f.col(perm[d]);
    KtsConfig cfg;
    cfg.max_seg_frames = 20;
    EXPECT_EQ(Segment(f, 2.0, cfg).change_points, Segment(g, 2.0, cfg).change_points);
  }
}

TEST(SegmentTest, PlantedPiecewiseRecovery) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Mat f = PiecewiseConstant({50, 50, 50, 50}, 8, 0.05, seed);
    const auto cps = Segment(f, 2.0, {}).change_points;
    ASSERT_EQ(cps.size(), 3u) << seed;
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_LE(std::abs(static_cast<long>(cps[i]) - 50 * static_cast<long>(i + 1)), 1);
    }
  }
}

TEST(SelectCountTest, PenaltyAndTies) {
  // Equal objectives keep the smaller count.
  const std::vector<double> costs = {0.0, 10.0, 4.0, 4.0};
  EXPECT_EQ(SelectSegmentCount(costs, 100, 0.0, 1), 2u);
  EXPECT_EQ(SelectSegmentCount(costs, 100, 1000.0, 1), 1u);
  EXPECT_EQ(SelectSegmentCount(costs, 100, 1000.0, 3), 3u);
}

TEST(CapTest, SecondsToFrames) {
  EXPECT_EQ(MaxSegmentFrames(5.0, 2.0), 10u);
  EXPECT_EQ(MaxSegmentFrames(5.0, 2.5), 13u);
  EXPECT_EQ(MaxSegmentFrames(5.0, 29.97), 150u);
}

TEST(SegmentationTest, ValidateAndRoundTrip) {
  Segmentation s{"v", 20, 2.0, {5, 9, 15}, 10};
  Validate(s);
  EXPECT_EQ(ParseSegmentation(FormatSegmentation(s)), s);
  EXPECT_EQ(ParseSegmentationJson(FormatSegmentationJson(s)), s);
  Segmentation bad = s;
  bad.change_points = {5, 5};
  EXPECT_THROW(Validate(bad), ValueError);
  bad.change_points = {0};
  EXPECT_THROW(Validate(bad), ValueError);
  bad = s;
  bad.max_seg_frames = 4;
  EXPECT_THROW(Validate(bad), ValueError);
}

}  // namespace
}  // namespace vidsum
