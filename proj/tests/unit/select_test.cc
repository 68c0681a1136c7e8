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
#include "vidsum/rng.h"
#include "vidsum/select.h"

namespace vidsum {
namespace {

ScoreVector Scores(std::vector<double> s) {
  ScoreVector v;
  v.video_id = "v";
  v.last_scored = s.size() - 1;
  v.scores = std::move(s);
  return v;
}

Segmentation EqualSegments(std::size_t t, std::size_t len) {
  Segmentation seg;
  seg.video_id = "v";
  seg.n_frames = t;
  seg.fps = 2.0;
  for (std::size_t c = len; c < t; c += len) seg.change_points.push_back(c);
  return seg;
}

double Value(const std::vector<double>& v, const std::vector<std::size_t>& idx) {
  double s = 0.0;
  for (std::size_t i : idx) s += v[i];
  return s;
}

TEST(IntervalScoresTest, Examples) {
  const auto c = IntervalScores(Scores(std::vector<double>(12, 0.4)), EqualSegments(12, 4));
  for (double x : c) EXPECT_DOUBLE_EQ(x, 0.4);
  EXPECT_EQ(IntervalScores(Scores({0, 1, 1, 0}), EqualSegments(4, 4)),
            (std::vector<double>{0.5}));
  const std::vector<double> s = {0.1, 0.9, 0.3};
  EXPECT_EQ(IntervalScores(Scores(s), EqualSegments(3, 1)), s);
}

TEST(KnapsackTest, Examples) {
  EXPECT_TRUE(KnapsackSelect({0.5, 0.2}, {1, 2}, 0).empty());
  EXPECT_EQ(KnapsackSelect({0.9, 0.6, 0.8}, {3, 4, 5}, 7), (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(KnapsackSelect({0.9}, {5}, 4).empty());
  EXPECT_THROW(KnapsackSelect({0.9}, {0}, 4), ValueError);
  EXPECT_THROW(KnapsackSelect({0.9, 0.1}, {1}, 4), Error);
}

TEST(KnapsackTest, MatchesBruteForce) {
  SplitMix64 rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = rng.UniformInt(16);
    std::vector<double> v(n);
    std::vector<std::size_t> w(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = trial % 3 == 0 ? static_cast<double>(rng.UniformInt(4)) / 4 : rng.Uniform();
      w[i] = 1 + rng.UniformInt(20);
    }
    const std::size_t cap = rng.UniformInt(80);
    const auto sel = KnapsackSelect(v, w, cap);
    std::size_t used = 0;
    for (std::size_t i : sel) used += w[i];
    EXPECT_LE(used, cap);
    EXPECT_TRUE(std::is_sorted(sel.begin(), sel.end()));
    EXPECT_EQ(Value(v, sel), oracle::KnapsackBest(v, w, cap)) << trial;
  }
}

TEST(KnapsackTest, MonotoneInCapacity) {
  SplitMix64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(10);
    std::vector<std::size_t> w(10);
    for (std::size_t i = 0; i < 10; ++i) {
      v[i] = rng.Uniform();
      w[i] = 1 + rng.UniformInt(10);
    }
    double prev = -1.0;
    for (std::size_t cap = 0; cap <= 60; ++cap) {
      const double value = Value(v, KnapsackSelect(v, w, cap));
      EXPECT_GE(value, prev);
      prev = value;
    }
  }
}

TEST(KnapsackTest, ScalingInvariance) {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> v(12);
    std::vector<std::size_t> w(12);
    for (std::size_t i = 0; i < 12; ++i) {
      v[i] = rng.Uniform();
      w[i] = 1 + rng.UniformInt(15);
    }
    const std::size_t cap = 10 + rng.UniformInt(40);
    // Powers of two scale without rounding, so the selection is identical.
    for (double c : {0.25, 2.0, 1024.0}) {
      std::vector<double> scaled = v;
      for (double& x : scaled) x *= c;
      EXPECT_EQ(KnapsackSelect(v, w, cap), KnapsackSelect(scaled, w, cap));
    }
  }
}

TEST(SummarizeTest, FullBudgetSelectsAll) {
  const Summary s = Summarize(Scores(std::vector<double>(20, 0.3)), EqualSegments(20, 5), 1.0);
  EXPECT_EQ(s.shots.size(), 4u);
  EXPECT_EQ(s.selected_frames, 20u);
}

TEST(SummarizeTest, DominantSegment) {
  std::vector<double> sc(40, 0.0);
  for (int i = 10; i < 15; ++i) sc[i] = 0.9;
  const Summary s = Summarize(Scores(sc), EqualSegments(40, 5), 0.15);
  ASSERT_EQ(s.shots.size(), 1u);
  EXPECT_EQ(s.shots[0], (std::pair<std::size_t, std::size_t>{10, 15}));
}

TEST(SummarizeTest, TenSegmentsBruteForce) {
  // 200 frames, 10 segments of 20, segment k scores 0.1 * (k + 1) with its
  // rank order shuffled; budget 0.15 -> 30 frames -> one segment fits.
  SplitMix64 rng(4);
  std::vector<std::size_t> rank(10);
  std::iota(rank.begin(), rank.end(), 0);
  Shuffle(rank, rng);
  std::vector<double> sc(200), seg_value(10);
  for (std::size_t k = 0; k < 10; ++k) {
    seg_value[k] = 0.1 * static_cast<double>(rank[k] + 1);
    for (std::size_t i = 0; i < 20; ++i) sc[20 * k + i] = seg_value[k];
  }
  const Summary s = Summarize(Scores(sc), EqualSegments(200, 20), 0.15);
  const double best = oracle::KnapsackBest(seg_value, std::vector<std::size_t>(10, 20), 30);
  double got = 0.0;
  for (auto [a, b] : s.shots) got += sc[a];
  EXPECT_NEAR(got, best, 1e-12);
  EXPECT_EQ(s.budget_frames, 30u);
}

TEST(SummarizeTest, NeverExceedsBudget) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t t = 10 + rng.UniformInt(300);
    std::vector<double> sc(t);
    for (double& x : sc) x = rng.Uniform();
    Segmentation seg;
    seg.video_id = "v";
    seg.n_frames = t;
    for (std::size_t c = 1 + rng.UniformInt(9); c < t; c += 1 + rng.UniformInt(12)) {
      seg.change_points.push_back(c);
    }
    const Summary s = Summarize(Scores(sc), seg, 0.15);
    EXPECT_LE(s.selected_frames, static_cast<std::size_t>(std::floor(0.15 * t)));
    std::size_t ones = 0;
    for (int m : s.frame_mask) ones += m;
    EXPECT_EQ(ones, s.selected_frames);
  }
}

TEST(BudgetTest, Floors) {
  EXPECT_EQ(BudgetFrames(0.15, 200), 30u);
  EXPECT_EQ(BudgetFrames(0.15, 20), 3u);
  EXPECT_EQ(BudgetFrames(0.15, 19), 2u);
  EXPECT_EQ(BudgetFrames(1.0, 7), 7u);
}

TEST(PercentileTest, Examples) {
  std::vector<double> sc(20);
  for (std::size_t i = 0; i < 20; ++i) sc[i] = 0.01 * static_cast<double>((i * 7) % 20);
  const auto mask = BinarizePercentile(Scores(sc), 0.85);
  EXPECT_EQ(std::count(mask.begin(), mask.end(), 1), 3);
  const auto eq = BinarizePercentile(Scores(std::vector<double>(9, 0.4)), 0.85);
  EXPECT_EQ(std::count(eq.begin(), eq.end(), 1), 9);
  const auto low = BinarizePercentile(Scores(sc), 1e-300);
  EXPECT_EQ(std::count(low.begin(), low.end(), 1), 20);
}

TEST(PercentileTest, DistinctScoresCount) {
  SplitMix64 rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t t = 1 + rng.UniformInt(400);
    std::vector<double> sc(t);
    for (double& x : sc) x = rng.Uniform();
    const auto mask = BinarizePercentile(Scores(sc), 0.85);
    EXPECT_EQ(static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1)),
              static_cast<std::size_t>(std::ceil(0.15 * t - 1e-9)))
        << t;
  }
}

TEST(SummaryFilesTest, RoundTrip) {
  std::vector<double> sc(40, 0.0);
  for (int i = 10; i < 15; ++i) sc[i] = 0.9;
  const Summary s = Summarize(Scores(sc), EqualSegments(40, 5), 0.15);
  EXPECT_EQ(ParseSummaryJson(FormatSummaryJson(s), 40), s);
  EXPECT_EQ(ParseMask(FormatMask(s.frame_mask)), s.frame_mask);
  EXPECT_THROW(ParseMask("0102"), Error);
}

}  // namespace
}  // namespace vidsum
