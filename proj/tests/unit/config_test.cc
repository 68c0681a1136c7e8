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

#include <gtest/gtest.h>

#include "vidsum/config.h"
#include "vidsum/errors.h"

namespace vidsum {
namespace {

TEST(ConfigTest, DefaultsValidate) { EXPECT_NO_THROW(Validate(RunConfig{})); }

TEST(ConfigTest, JsonRoundTrip) {
  RunConfig c;
  c.budget = 0.2;
  c.variant = Variant::kBaseline;
  c.stream = StreamSelection::kFused;
  c.kts_kernel = KernelKind::kRbf;
  c.eval_mask = EvalMask::kPercentile;
  c.seed = 1234567890123ULL;
  const RunConfig back = MergeJson(RunConfig{}, ToJson(c));
  EXPECT_EQ(ToJson(back), ToJson(c));
}

TEST(ConfigTest, MergeOverlaysOnlyGivenKeys) {
  RunConfig base;
  base.epochs = 3;
  const RunConfig c = MergeJson(base, {{"lr", 0.01}, {"stream", "flow"}});
  EXPECT_EQ(c.lr, 0.01);
  EXPECT_EQ(c.stream, StreamSelection::kFlow);
  EXPECT_EQ(c.epochs, 3);
}

TEST(ConfigTest, MergeRejectsBadInput) {
  EXPECT_THROW(MergeJson(RunConfig{}, {{"no_such_key", 1}}), ValueError);
  EXPECT_THROW(MergeJson(RunConfig{}, {{"stream", "depth"}}), ValueError);
  EXPECT_THROW(MergeJson(RunConfig{}, {{"epochs", "many"}}), FormatError);
  EXPECT_THROW(MergeJson(RunConfig{}, nlohmann::json::array()), FormatError);
}

TEST(ConfigTest, ValidateRanges) {
  auto bad = [](auto mutate) {
    RunConfig c;
    mutate(c);
    EXPECT_THROW(Validate(c), ValueError);
  };
  bad([](RunConfig& c) { c.budget = 0.0; });
  bad([](RunConfig& c) { c.budget = 1.5; });
  bad([](RunConfig& c) { c.percentile = 1.0; });
  bad([](RunConfig& c) { c.folds = 1; });
  bad([](RunConfig& c) { c.target_fps = 0.0; });
  bad([](RunConfig& c) { c.kts_penalty = -1.0; });
  bad([](RunConfig& c) { c.encdec_stride = 0; });
  bad([](RunConfig& c) { c.lstm_hidden = 0; });
}

TEST(ConfigTest, DerivedModuleConfigs) {
  RunConfig c;
  c.epochs = 6;
  EXPECT_EQ(MakeEncDecConfig(c, 1).train.epochs, 6);
  c.encdec_epochs = 2;
  EXPECT_EQ(MakeEncDecConfig(c, 1).train.epochs, 2);
  EXPECT_EQ(MakeScorerConfig(c, 1).train.epochs, 6);
  EXPECT_EQ(MakeKtsConfig(c, 2.0).max_seg_frames, 10u);
  c.max_shot_seconds = 0.0;
  EXPECT_FALSE(MakeKtsConfig(c, 2.0).max_seg_frames.has_value());
}

}  // namespace
}  // namespace vidsum
