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

#ifndef VIDSUM_KTS_H_
#define VIDSUM_KTS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vidsum/tensor.h"

namespace vidsum {

enum class KernelKind { kLinear, kRbf };

struct KernelSpec {
  KernelKind kind = KernelKind::kLinear;
  double gamma = 1.0;       // RBF only
  bool normalize = true;    // l2-normalize frames first
};

// K(i,j) = <x_i, x_j> (linear) or exp(-gamma |x_i - x_j|^2) (RBF).
Mat GramMatrix(const Mat& frames, const KernelSpec& kernel);

// O(1) intra-segment scatter from 2-D prefix sums of a Gram matrix:
//   v(a,b) = sum_{i in [a,b)} K(i,i) - (1/(b-a)) sum_{i,j in [a,b)} K(i,j)
class ScatterTable {
 public:
  explicit ScatterTable(const Mat& gram);

  double Scatter(std::size_t a, std::size_t b) const;
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  Mat prefix_;                 // (n+1) x (n+1) block sums
  std::vector<double> diag_;   // prefix sums of the diagonal
};

// Optimal segmentation cost for every segment count under an optional cap
// on segment length. costs[m] is the minimal total scatter with exactly m
// segments (infinity where infeasible; costs[0] unused).
struct KtsTable {
  std::vector<double> costs;
  // boundaries[m] = change points of the optimal m-segment solution.
  std::vector<std::vector<std::size_t>> boundaries;
};

// Dynamic program L[m][t] = min_{t'} L[m-1][t'] + v(t', t) over segment
// counts 1..max_segments, ties toward the smaller t'. With a cap only
// transitions with t - t' <= max_seg_frames are scanned.
KtsTable SolveKts(const ScatterTable& scatter,
                  std::optional<std::size_t> max_seg_frames,
                  std::size_t max_segments);

struct KtsConfig {
  KernelSpec kernel;
  double penalty = 1.0;                         // c >= 0
  std::optional<std::size_t> max_seg_frames;    // cap, frames
  std::optional<std::size_t> max_segments;      // default T
};

struct Segmentation {
  std::string video_id;
  std::size_t n_frames = 0;
  double fps = 0.0;
  std::vector<std::size_t> change_points;  // strictly increasing, in (0, T)
  std::optional<std::size_t> max_seg_frames;

  // Half-open [start, end) intervals covering [0, n_frames).
  std::vector<std::pair<std::size_t, std::size_t>> Segments() const;
  bool operator==(const Segmentation&) const = default;
};

// Throws ValueError if change points are not strictly increasing inside
// (0, n_frames) or a segment exceeds the cap.
void Validate(const Segmentation& seg);

// Segment count selection: m* = argmin_m J_m + c * m * (log(T/m) + 1) over
// ceil(T / cap) <= m <= max_segments, ties toward smaller m.
std::size_t SelectSegmentCount(const std::vector<double>& costs,
                               std::size_t num_frames, double penalty,
                               std::size_t min_segments);

Segmentation Segment(const Mat& frames, double fps, const KtsConfig& cfg,
                     const std::string& video_id = "");

// Cap in frames for a maximum shot duration: ceil(seconds * fps).
std::size_t MaxSegmentFrames(double seconds, double fps);

// Text export: "# video_id", "# n_frames", "# fps", optional
// "# max_seg_frames" comment lines, then one change point per line.
std::string FormatSegmentation(const Segmentation& seg);
Segmentation ParseSegmentation(std::string_view text);
std::string FormatSegmentationJson(const Segmentation& seg);
Segmentation ParseSegmentationJson(std::string_view text);

}  // namespace vidsum

#endif  // VIDSUM_KTS_H_
