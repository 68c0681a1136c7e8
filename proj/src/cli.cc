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

#include "vidsum/cli.h"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vidsum/config.h"
#include "vidsum/dataio.h"
#include "vidsum/errors.h"
#include "vidsum/eval.h"
#include "vidsum/pipeline.h"
#include "vidsum/select.h"
#include "vidsum/synth.h"
#include "vidsum/tensornet.h"

namespace vidsum {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Flags shared by the pipeline commands. Bound to optionals so that only
// flags given on the command line override the config file.
struct CommonFlags {
  std::string manifest;
  std::string out;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant;
  std::optional<std::string> stream;
  std::optional<double> budget;
  std::optional<double> percentile;
  std::optional<double> fps;
  std::optional<int> epochs;
  std::optional<std::size_t> batch;
  std::optional<double> lr;
  std::optional<double> kts_penalty;
  std::optional<std::string> kts_kernel;
  std::optional<double> max_shot_seconds;
  std::optional<std::size_t> folds;
  bool stratify = false;
};

void AddConfigFlags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON file with RunConfig keys");
  cmd->add_option("--seed", f.seed, "root seed");
  cmd->add_option("--variant", f.variant)
      ->check(CLI::IsMember({"baseline", "convnet", "convlstm", "summarynet"}));
  cmd->add_option("--stream", f.stream)->check(CLI::IsMember({"rgb", "flow", "fused"}));
  cmd->add_option("--budget", f.budget, "summary length as a fraction of the video");
  cmd->add_option("--percentile", f.percentile, "score binarization quantile");
  cmd->add_option("--fps", f.fps, "target frame rate");
  cmd->add_option("--epochs", f.epochs);
  cmd->add_option("--batch", f.batch);
  cmd->add_option("--lr", f.lr);
  cmd->add_option("--kts-penalty", f.kts_penalty);
  cmd->add_option("--kts-kernel", f.kts_kernel)->check(CLI::IsMember({"linear", "rbf"}));
  cmd->add_option("--max-shot-seconds", f.max_shot_seconds);
  cmd->add_option("--folds", f.folds);
  cmd->add_flag("--stratify", f.stratify, "stratify folds by category");
}

RunConfig ResolveConfig(const CommonFlags& f) {
  RunConfig cfg;
  if (!f.config.empty()) {
    json j;
    try {
      j = json::parse(ReadFileBytes(f.config));
    } catch (const json::exception& e) {
      throw FormatError("config file " + f.config + ": " + e.what());
    }
    cfg = MergeJson(cfg, j);
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.variant) cfg.variant = ParseVariant(*f.variant);
  if (f.stream) cfg.stream = ParseStreamSelection(*f.stream);
  if (f.budget) cfg.budget = *f.budget;
  if (f.percentile) cfg.percentile = *f.percentile;
  if (f.fps) cfg.target_fps = *f.fps;
  if (f.epochs) cfg.epochs = *f.epochs;
  if (f.batch) cfg.batch = *f.batch;
  if (f.lr) cfg.lr = *f.lr;
  if (f.kts_penalty) cfg.kts_penalty = *f.kts_penalty;
  if (f.kts_kernel) {
    cfg.kts_kernel = *f.kts_kernel == "rbf" ? KernelKind::kRbf : KernelKind::kLinear;
  }
  if (f.max_shot_seconds) cfg.max_shot_seconds = *f.max_shot_seconds;
  if (f.folds) cfg.folds = *f.folds;
  if (f.stratify) cfg.stratify = true;
  Validate(cfg);
  return cfg;
}

std::vector<Stream> SelectedStreams(const RunConfig& cfg) {
  switch (cfg.stream) {
    case StreamSelection::kRgb: return {Stream::kRgb};
    case StreamSelection::kFlow: return {Stream::kFlow};
    case StreamSelection::kFused: return {Stream::kRgb, Stream::kFlow};
  }
  return {};
}

bool NeedsFlow(const RunConfig& cfg) {
  return cfg.stream != StreamSelection::kRgb || cfg.kts_stream == Stream::kFlow;
}

// Collects written artifacts and emits run_record.json next to them.
class RunRecord {
 public:
  RunRecord(std::string command, fs::path out_dir)
      : command_(std::move(command)), out_dir_(std::move(out_dir)) {
    fs::create_directories(out_dir_);
  }

  void Write(const std::string& name, const std::string& bytes) {
    WriteFileAtomic(out_dir_ / name, bytes);
    hashes_[name] = Sha256Hex(bytes);
  }
  void Input(const std::string& name, const fs::path& path) {
    inputs_[name] = Sha256Hex(ReadFileBytes(path));
  }

  void Finish(const json& config, std::uint64_t seed, json extra = json::object()) {
    json j;
    j["command"] = command_;
    j["config"] = config;
    j["seed"] = seed;
    j["artifacts"] = hashes_;
    j["inputs"] = inputs_;
    if (!extra.empty()) j["details"] = std::move(extra);
    WriteFileAtomic(out_dir_ / "run_record.json", j.dump(2));
  }

  const fs::path& dir() const { return out_dir_; }

 private:
  std::string command_;
  fs::path out_dir_;
  std::map<std::string, std::string> hashes_;
  std::map<std::string, std::string> inputs_;
};

DatasetManifest LoadManifest(const std::string& path, RunRecord& record) {
  if (path.empty()) throw ValueError("--manifest is required");
  DatasetManifest m = ReadManifest(path);
  Validate(m, /*check_files=*/true);
  record.Input("manifest", path);
  return m;
}

std::vector<PreparedVideo> PrepareAll(const DatasetManifest& m, const RunConfig& cfg) {
  std::vector<PreparedVideo> videos;
  for (const auto& e : m.entries) {
    videos.push_back(PrepareVideo(m, e, cfg, NeedsFlow(cfg)));
  }
  return videos;
}

std::vector<const PreparedVideo*> Pointers(const std::vector<PreparedVideo>& v) {
  std::vector<const PreparedVideo*> out;
  for (const auto& x : v) out.push_back(&x);
  return out;
}

std::string ModelFileName(Stream s) {
  return "model." + std::string(ToString(s)) + ".vsmb";
}

int CmdSynth(const SynthSpec& spec, const std::string& out) {
  RunRecord record("synth", out);
  const SynthResult res = GenerateDataset(spec, out);
  // GenerateDataset writes the files itself; hash them for the record.
  std::map<std::string, std::string> hashes;
  json files = json::object();
  for (const auto& entry : fs::directory_iterator(out)) {
    const std::string name = entry.path().filename().string();
    if (name == "run_record.json") continue;
    files[name] = Sha256Hex(ReadFileBytes(entry.path()));
  }
  json spec_j = {{"n_videos", spec.n_videos},   {"t_min", spec.t_min},
                 {"t_max", spec.t_max},         {"dim", spec.dim},
                 {"segments_min", spec.segments_min},
                 {"segments_max", spec.segments_max},
                 {"min_segment_frames", spec.min_segment_frames},
                 {"summary_fraction", spec.summary_fraction},
                 {"n_users", spec.n_users},     {"user_noise", spec.user_noise},
                 {"feature_noise", spec.feature_noise},
                 {"marker_strength", spec.marker_strength},
                 {"fps", spec.fps},             {"n_categories", spec.n_categories},
                 {"with_flow", spec.with_flow}, {"seed", spec.seed}};
  json extra = {{"files", files}};
  record.Finish(spec_j, spec.seed, extra);
  std::printf("wrote %zu videos to %s\n", spec.n_videos, out.c_str());
  return kExitOk;
}

int CmdTrainEncDec(const CommonFlags& f) {
  const RunConfig cfg = ResolveConfig(f);
  RunRecord record("train-encdec", f.out);
  const DatasetManifest m = LoadManifest(f.manifest, record);
  const auto videos = PrepareAll(m, cfg);
  json meta = json::object();
  for (Stream s : SelectedStreams(cfg)) {
    const EncDecModel model = TrainEncDecOn(Pointers(videos), s, cfg,
                                            DeriveSeed(cfg.seed, ToString(s)));
    const std::string name = "encdec." + std::string(ToString(s)) + ".vsmb";
    record.Write(name, EncodeModel(ToBundle(model, s)));
    meta[name] = {{"epochs_run", model.meta.epochs_run},
                  {"best_val_loss", model.meta.best_val_loss}};
    std::printf("%s: best validation loss %.6g\n", name.c_str(),
                model.meta.best_val_loss);
  }
  record.Finish(ToJson(cfg), cfg.seed, meta);
  return kExitOk;
}

int CmdTrainScorer(const CommonFlags& f) {
  const RunConfig cfg = ResolveConfig(f);
  RunRecord record("train-scorer", f.out);
  const DatasetManifest m = LoadManifest(f.manifest, record);
  const auto videos = PrepareAll(m, cfg);
  json meta = json::object();
  for (Stream s : SelectedStreams(cfg)) {
    const StreamModel model = TrainStreamModel(Pointers(videos), s, cfg,
                                               DeriveSeed(cfg.seed, ToString(s)));
    const std::string name = ModelFileName(s);
    record.Write(name, EncodeModel(ToBundle(model)));
    meta[name] = {{"epochs_run", model.scorer.meta.epochs_run},
                  {"best_val_loss", model.scorer.meta.best_val_loss}};
    std::printf("%s: best validation loss %.6g\n", name.c_str(),
                model.scorer.meta.best_val_loss);
  }
  record.Finish(ToJson(cfg), cfg.seed, meta);
  return kExitOk;
}

int CmdScore(const CommonFlags& f, const std::string& models_dir) {
  RunConfig cfg = ResolveConfig(f);
  RunRecord record("score", f.out);
  const DatasetManifest m = LoadManifest(f.manifest, record);
  std::vector<StreamModel> models;
  for (Stream s : SelectedStreams(cfg)) {
    const fs::path p = fs::path(models_dir) / ModelFileName(s);
    record.Input(ModelFileName(s), p);
    models.push_back(StreamModelFromBundle(LoadModel(p)));
  }
  std::vector<const StreamModel*> ptrs;
  for (const auto& x : models) ptrs.push_back(&x);
  for (const auto& e : m.entries) {
    const PreparedVideo v = PrepareVideo(m, e, cfg, cfg.stream != StreamSelection::kRgb);
    record.Write(e.video_id + ".scores.txt", FormatScores(ScoreWithModels(ptrs, v)));
  }
  record.Finish(ToJson(cfg), cfg.seed);
  return kExitOk;
}

int CmdSegment(const CommonFlags& f) {
  const RunConfig cfg = ResolveConfig(f);
  RunRecord record("segment", f.out);
  const DatasetManifest m = LoadManifest(f.manifest, record);
  for (const auto& e : m.entries) {
    const PreparedVideo v = PrepareVideo(m, e, cfg, cfg.kts_stream == Stream::kFlow);
    record.Write(e.video_id + ".kts.txt", FormatSegmentation(SegmentVideo(v, cfg)));
  }
  record.Finish(ToJson(cfg), cfg.seed);
  return kExitOk;
}

int CmdSummarize(const CommonFlags& f, const std::string& scores_dir,
                 const std::string& segments_dir) {
  const RunConfig cfg = ResolveConfig(f);
  RunRecord record("summarize", f.out);
  const DatasetManifest m = LoadManifest(f.manifest, record);
  for (const auto& e : m.entries) {
    const fs::path sp = fs::path(scores_dir) / (e.video_id + ".scores.txt");
    const fs::path gp = fs::path(segments_dir) / (e.video_id + ".kts.txt");
    const ScoreVector scores = ParseScores(ReadFileBytes(sp));
    const Segmentation seg = ParseSegmentation(ReadFileBytes(gp));
    if (scores.video_id != e.video_id || seg.video_id != e.video_id) {
      throw IdMismatchError("score or segment file does not belong to '" +
                            e.video_id + "'");
    }
    const Summary s = Summarize(scores, seg, cfg.budget, cfg.shot_value);
    record.Write(e.video_id + ".summary.json", FormatSummaryJson(s));
    record.Write(e.video_id + ".mask.txt", FormatMask(s.frame_mask));
  }
  record.Finish(ToJson(cfg), cfg.seed);
  return kExitOk;
}

json ScoresJson(const OverlapScores& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"fscore", s.fscore}};
}

// Two modes: a pair of mask files, or a directory of predicted masks against
// the consolidated annotations of a manifest.
int CmdEvaluate(const CommonFlags& f, const std::string& pred, const std::string& gt,
                const std::string& masks_dir) {
  const RunConfig cfg = ResolveConfig(f);
  RunRecord record("evaluate", f.out);
  json result;
  if (!pred.empty() || !gt.empty()) {
    if (pred.empty() || gt.empty()) throw ValueError("--pred and --gt go together");
    record.Input("pred", pred);
    record.Input("gt", gt);
    const OverlapScores s =
        OverlapMetrics(ParseMask(ReadFileBytes(pred)), ParseMask(ReadFileBytes(gt)));
    result = ScoresJson(s);
    std::printf("precision %.2f recall %.2f F %.2f\n", s.precision, s.recall, s.fscore);
  } else {
    if (masks_dir.empty()) throw ValueError("give --pred/--gt or --masks with --manifest");
    const DatasetManifest m = LoadManifest(f.manifest, record);
    json per = json::array();
    double mean = 0.0;
    for (const auto& e : m.entries) {
      const PreparedVideo v = PrepareVideo(m, e, cfg, false);
      const std::vector<int> p =
          ParseMask(ReadFileBytes(fs::path(masks_dir) / (e.video_id + ".mask.txt")));
      std::vector<int> g(v.targets.size());
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = v.targets[i] > 0.5;
      const OverlapScores s = OverlapMetrics(p, g);
      json row = ScoresJson(s);
      row["video_id"] = e.video_id;
      per.push_back(row);
      mean += s.fscore / static_cast<double>(m.entries.size());
      std::printf("%-12s P %6.2f R %6.2f F %6.2f\n", e.video_id.c_str(), s.precision,
                  s.recall, s.fscore);
    }
    std::printf("mean F %.2f\n", mean);
    result = {{"per_video", per}, {"mean_fscore", mean}};
  }
  record.Write("evaluation.json", result.dump(2));
  record.Finish(ToJson(cfg), cfg.seed);
  return kExitOk;
}

int CmdCrossval(const CommonFlags& f, bool quiet, bool curves) {
  const RunConfig cfg = ResolveConfig(f);
  RunRecord record("crossval", f.out);
  const DatasetManifest m = LoadManifest(f.manifest, record);
  ProgressFn progress;
  if (!quiet) progress = [](const std::string& s) { std::fprintf(stderr, "%s\n", s.c_str()); };
  const EvalReport report = Crossval(m, cfg, progress);
  const std::string table = FormatReportTable(report);
  record.Write("report.json", ToJson(report).dump(2));
  record.Write("report.txt", table);
  if (curves) {
    for (const auto& r : report.per_video) {
      record.Write(r.video_id + ".curve.txt", FormatCurve(r));
    }
  }
  record.Finish(ToJson(cfg), cfg.seed);
  std::fputs(table.c_str(), stdout);
  return kExitOk;
}

int CmdGradcheck(const std::string& out, std::uint64_t seed, double tol) {
  RunRecord record("gradcheck", out);
  struct Case {
    std::string name;
    std::vector<LayerSpec> specs;
    std::size_t steps;
  };
  ScorerConfig small;
  small.lstm_hidden = 3;
  small.conv_channels = 4;
  small.mlp_units = 4;
  const std::vector<Case> cases = {
      {"dense", {{"d", LayerKind::kDense, 6, 4, 1, false, Activation::kTanh}}, 1},
      {"conv1d", {{"c", LayerKind::kConv1D, 4, 3, 3, false, Activation::kReLU}}, 5},
      {"lstm", {{"l", LayerKind::kLstm, 4, 3, 1, false, Activation::kLinear}}, 5},
      {"bilstm", {{"l", LayerKind::kLstm, 4, 3, 1, true, Activation::kLinear}}, 5},
      {"summarynet",
       ScorerLayers(small, 5),
       5},
  };
  json results = json::array();
  bool ok = true;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Case& c = cases[i];
    const GradCheckResult r = GradCheckNetwork(c.specs, c.steps, 2, DeriveSeed(seed, c.name));
    const bool pass = r.max_rel_error <= tol;
    ok = ok && pass;
    std::printf("%-10s max relative error %.3e  %s\n", c.name.c_str(), r.max_rel_error,
                pass ? "ok" : "FAIL");
    results.push_back({{"case", c.name},
                       {"max_rel_error", r.max_rel_error},
                       {"worst_param", r.worst_param},
                       {"worst_analytic", r.worst_analytic},
                       {"worst_numeric", r.worst_numeric},
                       {"pass", pass}});
  }
  record.Write("gradcheck.json", results.dump(2));
  record.Finish({{"tolerance", tol}}, seed);
  return ok ? kExitOk : kExitValidation;
}

}  // namespace

int RunCli(int argc, char** argv) {
  CLI::App app{"Video summarization pipeline on precomputed frame features"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "vidsum 0.1.0");

  SynthSpec spec;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--out", synth_out)->required();
  synth->add_option("--videos", spec.n_videos);
  synth->add_option("--seed", spec.seed);
  synth->add_option("--dim", spec.dim);
  synth->add_option("--t-min", spec.t_min);
  synth->add_option("--t-max", spec.t_max);
  synth->add_option("--users", spec.n_users);
  synth->add_option("--user-noise", spec.user_noise);
  synth->add_option("--feature-noise", spec.feature_noise);
  synth->add_option("--marker-strength", spec.marker_strength);
  synth->add_option("--summary-fraction", spec.summary_fraction);
  synth->add_option("--categories", spec.n_categories);
  synth->add_option("--fps", spec.fps);
  bool no_flow = false;
  synth->add_flag("--no-flow", no_flow);

  CommonFlags flags;
  auto add_pipeline = [&](const char* name, const char* help, bool needs_manifest) {
    auto* cmd = app.add_subcommand(name, help);
    auto* man = cmd->add_option("--manifest", flags.manifest);
    if (needs_manifest) man->required();
    cmd->add_option("--out", flags.out)->required();
    AddConfigFlags(cmd, flags);
    return cmd;
  };
  auto* train_encdec = add_pipeline("train-encdec", "train the encoder-decoder", true);
  auto* train_scorer = add_pipeline("train-scorer", "train a frame scorer", true);
  std::string models_dir;
  auto* score = add_pipeline("score", "score every video of a manifest", true);
  score->add_option("--models", models_dir, "directory with model.<stream>.vsmb")
      ->required();
  auto* segment = add_pipeline("segment", "KTS change points", true);
  std::string scores_dir, segments_dir;
  auto* summarize = add_pipeline("summarize", "knapsack key-shot selection", true);
  summarize->add_option("--scores", scores_dir)->required();
  summarize->add_option("--segments", segments_dir)->required();
  std::string pred, gt, masks_dir;
  auto* evaluate = add_pipeline("evaluate", "temporal-overlap precision/recall/F", false);
  evaluate->add_option("--pred", pred, "predicted mask file");
  evaluate->add_option("--gt", gt, "ground-truth mask file");
  evaluate->add_option("--masks", masks_dir, "directory of <id>.mask.txt");
  bool quiet = false;
  auto* crossval = add_pipeline("crossval", "k-fold train and evaluate", true);
  crossval->add_flag("--quiet", quiet);
  bool curves = false;
  crossval->add_flag("--curves", curves, "also write <id>.curve.txt score/gt columns");

  std::string gc_out;
  std::uint64_t gc_seed = 0;
  double gc_tol = 1e-4;
  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient checks");
  gradcheck->add_option("--out", gc_out)->required();
  gradcheck->add_option("--seed", gc_seed);
  gradcheck->add_option("--tolerance", gc_tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*synth) {
      spec.with_flow = !no_flow;
      return CmdSynth(spec, synth_out);
    }
    if (*train_encdec) return CmdTrainEncDec(flags);
    if (*train_scorer) return CmdTrainScorer(flags);
    if (*score) return CmdScore(flags, models_dir);
    if (*segment) return CmdSegment(flags);
    if (*summarize) return CmdSummarize(flags, scores_dir, segments_dir);
    if (*evaluate) return CmdEvaluate(flags, pred, gt, masks_dir);
    if (*crossval) return CmdCrossval(flags, quiet, curves);
    if (*gradcheck) return CmdGradcheck(gc_out, gc_seed, gc_tol);
  } catch (const IoError& e) {
    std::fprintf(stderr, "vidsum: I/O error: %s\n", e.what());
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "vidsum: I/O error: %s\n", e.what());
    return kExitIo;
  } catch (const Error& e) {
    std::fprintf(stderr, "vidsum: %s\n", e.what());
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace vidsum
