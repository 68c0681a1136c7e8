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

#ifndef VIDSUM_SYNTH_H_
#define VIDSUM_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vidsum/dataio.h"

namespace vidsum {

// Synthetic dataset parameters. Every video is a run of constant-prototype
// segments plus Gaussian noise. A planted subset of segments is "summary";
// their prototypes are shifted along one fixed unit direction so the label
// is learnable from features.
struct SynthSpec {
  std::size_t n_videos = 10;
  std::size_t t_min = 300;
  std::size_t t_max = 600;
  std::size_t dim = 64;
  std::size_t segments_min = 20;
  std::size_t segments_max = 40;
  std::size_t min_segment_frames = 4;
  double summary_fraction = 0.15;
  std::size_t n_users = 15;
  double user_noise = 0.1;      // per-frame flip probability of each user
  // Per-entry noise std and marker shift, both as fractions of the
  // prototype norm.
  double feature_noise = 0.25;
  double marker_strength = 0.8;
  double fps = 4.0;
  std::size_t n_categories = 0;  // 0: no category field
  bool with_flow = true;
  std::uint64_t seed = 0;
};

// Throws ValueError for out-of-range fields.
void Validate(const SynthSpec& spec);

struct PlantedTruth {
  std::string video_id;
  std::size_t n_frames = 0;
  std::vector<std::size_t> change_points;
  std::vector<int> summary_mask;
  std::vector<std::size_t> summary_segments;  // indices into the segments
};

struct SynthVideo {
  FeatureSequence rgb;
  FeatureSequence flow;  // empty frames when spec.with_flow is false
  AnnotationSet annotations;
  std::string category;  // empty when spec.n_categories == 0
  PlantedTruth truth;
};

// Video `index` of the dataset; depends only on (spec, index).
SynthVideo GenerateVideo(const SynthSpec& spec, std::size_t index);

// Piecewise-constant sequence with `segment_lengths` blocks; each block uses
// an independent Gaussian prototype and per-entry noise std
// noise * |prototype|. Used by the planted-recovery checks.
Mat PiecewiseConstant(const std::vector<std::size_t>& segment_lengths,
                      std::size_t dim, double noise, std::uint64_t seed);

struct SynthResult {
  std::filesystem::path manifest_path;
  std::vector<PlantedTruth> truth;
};

// Writes <id>.rgb.fseq, <id>.flow.fseq, <id>.ann.json per video plus
// manifest.json and planted.json into `out_dir`.
SynthResult GenerateDataset(const SynthSpec& spec,
                            const std::filesystem::path& out_dir);

std::string FormatPlantedJson(const std::vector<PlantedTruth>& truth);

}  // namespace vidsum

#endif  // VIDSUM_SYNTH_H_
