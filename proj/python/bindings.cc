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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "json.hpp"
#include "vidsum/config.h"
#include "vidsum/dataio.h"
#include "vidsum/errors.h"
#include "vidsum/eval.h"
#include "vidsum/kts.h"
#include "vidsum/select.h"
#include "vidsum/synth.h"

namespace py = pybind11;

namespace vidsum {
namespace {

ScoreVector FullCoverage(std::vector<double> scores) {
  ScoreVector s;
  s.scores = std::move(scores);
  s.last_scored = s.scores.empty() ? 0 : s.scores.size() - 1;
  return s;
}

Segmentation FromChangePoints(std::vector<std::size_t> cps, std::size_t n_frames) {
  Segmentation seg;
  seg.n_frames = n_frames;
  seg.change_points = std::move(cps);
  Validate(seg);
  return seg;
}

py::dict ScoresDict(const OverlapScores& s) {
  py::dict d;
  d["precision"] = s.precision;
  d["recall"] = s.recall;
  d["fscore"] = s.fscore;
  return d;
}

RunConfig ConfigFromJson(const std::string& text) {
  RunConfig cfg;
  if (!text.empty()) cfg = MergeJson(cfg, nlohmann::json::parse(text));
  Validate(cfg);
  return cfg;
}

}  // namespace
}  // namespace vidsum

PYBIND11_MODULE(_core, m) {
  using namespace vidsum;
  m.doc() = "vidsum core operations";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<ValueError>(m, "InvalidValueError", base.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<IdMismatchError>(m, "IdMismatchError", base.ptr());

  m.def(
      "read_features",
      [](const std::filesystem::path& path) {
        const FeatureSequence f = ReadFeatures(path);
        return py::make_tuple(f.video_id, std::string(ToString(f.stream)), f.fps,
                              f.frames);
      },
      py::arg("path"), "Returns (video_id, stream, fps, frames[T, D]).");

  m.def(
      "write_features",
      [](const std::filesystem::path& path, const std::string& video_id,
         const std::string& stream, float fps, const FrameMatrix& frames) {
        FeatureSequence f;
        f.video_id = video_id;
        f.stream = ParseStream(stream);
        f.fps = fps;
        f.frames = frames;
        WriteFeatures(f, path);
      },
      py::arg("path"), py::arg("video_id"), py::arg("stream"), py::arg("fps"),
      py::arg("frames"));

  m.def("knapsack_select", &KnapsackSelect, py::arg("values"), py::arg("weights"),
        py::arg("capacity"), "Indices of the chosen items, ascending.");

  m.def("budget_frames", &BudgetFrames, py::arg("fraction"), py::arg("num_frames"));

  m.def(
      "kts_segment",
      [](const Mat& frames, double fps, double penalty,
         std::optional<std::size_t> max_seg_frames, const std::string& kernel) {
        KtsConfig cfg;
        cfg.penalty = penalty;
        cfg.max_seg_frames = max_seg_frames;
        cfg.kernel.kind = kernel == "rbf" ? KernelKind::kRbf : KernelKind::kLinear;
        return Segment(frames, fps, cfg).change_points;
      },
      py::arg("frames"), py::arg("fps"), py::arg("penalty") = 1.0,
      py::arg("max_seg_frames") = py::none(), py::arg("kernel") = "linear",
      "Change points of a [T, D] feature matrix.");

  m.def(
      "summarize",
      [](std::vector<double> scores, std::vector<std::size_t> change_points,
         double budget) {
        const std::size_t n = scores.size();
        const Summary s = Summarize(FullCoverage(std::move(scores)),
                                    FromChangePoints(std::move(change_points), n), budget);
        return py::make_tuple(s.shots, s.frame_mask);
      },
      py::arg("scores"), py::arg("change_points"), py::arg("budget") = 0.15,
      "Key-shot selection; returns (shots, frame_mask).");

  m.def(
      "binarize_percentile",
      [](std::vector<double> scores, double q) {
        return BinarizePercentile(FullCoverage(std::move(scores)), q);
      },
      py::arg("scores"), py::arg("q") = 0.85);

  m.def(
      "overlap_metrics",
      [](const std::vector<int>& pred, const std::vector<int>& gt) {
        return ScoresDict(OverlapMetrics(pred, gt));
      },
      py::arg("pred"), py::arg("gt"));

  m.def(
      "generate_dataset",
      [](const std::filesystem::path& out_dir, std::size_t n_videos, std::size_t dim,
         std::size_t t_min, std::size_t t_max, double user_noise, std::uint64_t seed,
         bool with_flow) {
        SynthSpec spec;
        spec.n_videos = n_videos;
        spec.dim = dim;
        spec.t_min = t_min;
        spec.t_max = t_max;
        spec.user_noise = user_noise;
        spec.seed = seed;
        spec.with_flow = with_flow;
        return GenerateDataset(spec, out_dir).manifest_path;
      },
      py::arg("out_dir"), py::arg("n_videos") = 10, py::arg("dim") = 64,
      py::arg("t_min") = 300, py::arg("t_max") = 600, py::arg("user_noise") = 0.1,
      py::arg("seed") = 0, py::arg("with_flow") = true,
      "Writes a synthetic dataset and returns the manifest path.");

  m.def(
      "default_config", [] { return ToJson(RunConfig{}).dump(); },
      "Default run configuration as a JSON string.");

  m.def(
      "crossval",
      [](const std::filesystem::path& manifest, const std::string& config_json) {
        const RunConfig cfg = ConfigFromJson(config_json);
        const DatasetManifest man = ReadManifest(manifest);
        EvalReport report;
        {
          py::gil_scoped_release release;
          report = Crossval(man, cfg);
        }
        return ToJson(report).dump();
      },
      py::arg("manifest"), py::arg("config_json") = "",
      "Runs k-fold evaluation and returns the report as a JSON string.");
}
