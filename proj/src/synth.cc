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

#include "vidsum/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "vidsum/errors.h"
#include "vidsum/rng.h"

namespace vidsum {
namespace {

Vec GaussianVector(std::size_t dim, SplitMix64& rng) {
  Vec v(dim);
  for (std::size_t i = 0; i < dim; ++i) v(i) = rng.Normal();
  return v;
}

// Random partition of `total` frames into `n` parts of at least `min_len`.
std::vector<std::size_t> SegmentLengths(std::size_t total, std::size_t n,
                                        std::size_t min_len, SplitMix64& rng) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& x : w) sum += (x = 0.5 + rng.Uniform());
  const std::size_t spare = total - n * min_len;
  std::vector<std::size_t> len(n, min_len);
  std::size_t used = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto extra = static_cast<std::size_t>(std::floor(w[k] / sum * spare));
    len[k] += extra;
    used += extra;
  }
  for (std::size_t k = 0; used < spare; k = (k + 1) % n, ++used) ++len[k];
  return len;
}

std::string VideoId(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "vid%03zu", index);
  return buf;
}

// Frames for one stream: per-segment prototype, marker shift on summary
// segments, isotropic noise.
FrameMatrix StreamFrames(const SynthSpec& spec,
                         const std::vector<std::size_t>& lengths,
                         const std::vector<bool>& is_summary, const Vec& marker,
                         SplitMix64& rng) {
  std::size_t total = 0;
  for (std::size_t l : lengths) total += l;
  FrameMatrix frames(static_cast<Eigen::Index>(total),
                     static_cast<Eigen::Index>(spec.dim));
  std::size_t row = 0;
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    Vec proto = GaussianVector(spec.dim, rng);
    // Only summary segments carry a component along the marker direction.
    proto -= proto.dot(marker) * marker;
    const double norm = proto.norm();
    if (is_summary[k]) proto += spec.marker_strength * norm * marker;
    const double sigma = spec.feature_noise * norm;
    for (std::size_t i = 0; i < lengths[k]; ++i, ++row) {
      for (std::size_t d = 0; d < spec.dim; ++d) {
        frames(row, d) = static_cast<float>(proto(d) + sigma * rng.Normal());
      }
    }
  }
  return frames;
}

}  // namespace

void Validate(const SynthSpec& s) {
  if (s.n_videos == 0 || s.dim == 0 || s.n_users == 0) {
    throw ValueError("synth needs videos, dims and users");
  }
  if (s.t_min == 0 || s.t_min > s.t_max) throw ValueError("bad T range");
  if (s.segments_min == 0 || s.segments_min > s.segments_max) {
    throw ValueError("bad segment count range");
  }
  if (s.segments_max * std::max<std::size_t>(s.min_segment_frames, 1) > s.t_min) {
    throw ValueError("T range too short for the segment counts");
  }
  if (!(s.summary_fraction > 0.0 && s.summary_fraction < 1.0)) {
    throw ValueError("summary fraction must lie in (0, 1)");
  }
  if (!(s.user_noise >= 0.0 && s.user_noise <= 1.0) || !(s.feature_noise >= 0.0) ||
      !(s.marker_strength >= 0.0)) {
    throw ValueError("noise levels must be non-negative");
  }
  if (!(s.fps > 0.0)) throw ValueError("fps must be positive");
  if (s.dim < 2) throw ValueError("dim must be at least 2");
}

Mat PiecewiseConstant(const std::vector<std::size_t>& segment_lengths,
                      std::size_t dim, double noise, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::size_t total = 0;
  for (std::size_t l : segment_lengths) total += l;
  Mat out(total, dim);
  std::size_t row = 0;
  for (std::size_t l : segment_lengths) {
    const Vec proto = GaussianVector(dim, rng);
    const double sigma = noise * proto.norm();
    for (std::size_t i = 0; i < l; ++i, ++row) {
      for (std::size_t d = 0; d < dim; ++d) {
        out(row, d) = proto(d) + sigma * rng.Normal();
      }
    }
  }
  return out;
}

SynthVideo GenerateVideo(const SynthSpec& spec, std::size_t index) {
  Validate(spec);
  SplitMix64 rng(DeriveSeed(spec.seed, "synth-video", index));
  SynthVideo v;
  const std::string id = VideoId(index);
  const std::size_t t =
      spec.t_min + static_cast<std::size_t>(rng.UniformInt(spec.t_max - spec.t_min + 1));
  const std::size_t n_seg =
      spec.segments_min +
      static_cast<std::size_t>(rng.UniformInt(spec.segments_max - spec.segments_min + 1));
  const std::vector<std::size_t> lengths =
      SegmentLengths(t, n_seg, spec.min_segment_frames, rng);

  // Planted summary: shuffled segments added while they fit the target.
  std::vector<std::size_t> order(n_seg);
  for (std::size_t k = 0; k < n_seg; ++k) order[k] = k;
  Shuffle(order, rng);
  const double target = spec.summary_fraction * static_cast<double>(t);
  std::vector<bool> is_summary(n_seg, false);
  std::size_t planted = 0;
  for (std::size_t k : order) {
    if (static_cast<double>(planted + lengths[k]) <= target) {
      is_summary[k] = true;
      planted += lengths[k];
    }
  }

  v.truth.video_id = id;
  v.truth.n_frames = t;
  v.truth.summary_mask.assign(t, 0);
  std::size_t start = 0;
  for (std::size_t k = 0; k < n_seg; ++k) {
    if (k > 0) v.truth.change_points.push_back(start);
    if (is_summary[k]) {
      v.truth.summary_segments.push_back(k);
      std::fill(v.truth.summary_mask.begin() + start,
                v.truth.summary_mask.begin() + start + lengths[k], 1);
    }
    start += lengths[k];
  }

  // One marker direction for the whole dataset.
  SplitMix64 marker_rng(DeriveSeed(spec.seed, "synth-marker"));
  Vec marker = GaussianVector(spec.dim, marker_rng);
  marker /= marker.norm();

  SplitMix64 rgb_rng(DeriveSeed(spec.seed, "synth-rgb", index));
  v.rgb.video_id = id;
  v.rgb.stream = Stream::kRgb;
  v.rgb.fps = static_cast<float>(spec.fps);
  v.rgb.frames = StreamFrames(spec, lengths, is_summary, marker, rgb_rng);

  if (spec.with_flow) {
    SplitMix64 flow_rng(DeriveSeed(spec.seed, "synth-flow", index));
    v.flow.video_id = id;
    v.flow.stream = Stream::kFlow;
    v.flow.fps = static_cast<float>(spec.fps);
    FrameMatrix f = StreamFrames(spec, lengths, is_summary, marker, flow_rng);
    // Min-max to [0, 1] over the whole video, as real flow features are.
    const float lo = f.minCoeff();
    const float hi = f.maxCoeff();
    if (hi > lo) {
      f = ((f.array() - lo) / (hi - lo)).cwiseMax(0.0f).cwiseMin(1.0f).matrix();
    } else {
      f.setZero();
    }
    v.flow.frames = std::move(f);
  }

  SplitMix64 user_rng(DeriveSeed(spec.seed, "synth-users", index));
  v.annotations.video_id = id;
  v.annotations.fps = spec.fps;
  v.annotations.n_frames = t;
  for (std::size_t u = 0; u < spec.n_users; ++u) {
    std::vector<double> s(t);
    for (std::size_t i = 0; i < t; ++i) {
      const bool flip = user_rng.Uniform() < spec.user_noise;
      s[i] = (v.truth.summary_mask[i] != 0) != flip ? 1.0 : 0.0;
    }
    v.annotations.users.push_back(std::move(s));
  }
  if (spec.n_categories > 0) {
    v.category = "cat" + std::to_string(index % spec.n_categories);
  }
  return v;
}

std::string FormatPlantedJson(const std::vector<PlantedTruth>& truth) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& t : truth) {
    j.push_back({{"video_id", t.video_id},
                 {"n_frames", t.n_frames},
                 {"change_points", t.change_points},
                 {"summary_segments", t.summary_segments},
                 {"summary_mask", t.summary_mask}});
  }
  return j.dump();
}

SynthResult GenerateDataset(const SynthSpec& spec,
                            const std::filesystem::path& out_dir) {
  Validate(spec);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "'");
  SynthResult result;
  DatasetManifest manifest;
  for (std::size_t i = 0; i < spec.n_videos; ++i) {
    SynthVideo v = GenerateVideo(spec, i);
    const std::string id = v.truth.video_id;
    ManifestEntry e;
    e.video_id = id;
    e.path_rgb = id + ".rgb.fseq";
    e.path_annotations = id + ".ann.json";
    WriteFeatures(v.rgb, out_dir / e.path_rgb);
    if (spec.with_flow) {
      e.path_flow = id + ".flow.fseq";
      WriteFeatures(v.flow, out_dir / *e.path_flow);
    }
    WriteAnnotations(v.annotations, out_dir / e.path_annotations);
    if (!v.category.empty()) e.category = v.category;
    manifest.entries.push_back(std::move(e));
    result.truth.push_back(std::move(v.truth));
  }
  result.manifest_path = out_dir / "manifest.json";
  WriteManifest(manifest, result.manifest_path);
  WriteFileAtomic(out_dir / "planted.json", FormatPlantedJson(result.truth));
  return result;
}

}  // namespace vidsum
