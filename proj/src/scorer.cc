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

#include "vidsum/scorer.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "vidsum/errors.h"
#include "vidsum/preprocess.h"

namespace vidsum {
namespace {

using nlohmann::json;

WindowSet WindowsOf(const std::vector<const LabeledSequence*>& data,
                    std::size_t window_len) {
  WindowSet set;
  set.window_len = window_len;
  for (std::size_t s = 0; s < data.size(); ++s) {
    const LabeledSequence& seq = *data[s];
    const auto t = static_cast<std::size_t>(seq.features.rows());
    if (seq.targets.size() != t) {
      throw ShapeError("targets of '" + seq.video_id +
                       "' do not match its frame count");
    }
    set.sequences.push_back(&seq.features);
    if (t < window_len) continue;
    for (std::size_t start : WindowStarts(t, window_len, 1)) {
      set.items.push_back({static_cast<std::uint32_t>(s),
                           static_cast<std::uint32_t>(start),
                           seq.targets[start + window_len / 2]});
    }
  }
  return set;
}

std::string FormatReal(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

}  // namespace

std::vector<LayerSpec> ScorerLayers(const ScorerConfig& cfg,
                                    std::size_t input_dim) {
  const Activation sig = Activation::kSigmoid;
  std::vector<LayerSpec> layers;
  std::size_t dim = input_dim;
  auto add = [&](LayerSpec s) {
    s.in_dim = dim;
    dim = s.OutputDim();
    layers.push_back(std::move(s));
  };
  if (cfg.variant == Variant::kBaseline) {
    add({"scorer.mlp1", LayerKind::kDense, 0, cfg.mlp_units, 1, false, sig});
    add({"scorer.mlp2", LayerKind::kDense, 0, cfg.mlp_units, 1, false, sig});
  } else {
    if (cfg.variant != Variant::kConvNet) {
      add({"scorer.lstm", LayerKind::kLstm, 0, cfg.lstm_hidden, 1, true,
           Activation::kLinear});
    }
    add({"scorer.conv1", LayerKind::kConv1D, 0, cfg.conv_channels,
         cfg.conv_width, false, cfg.conv_activation});
    add({"scorer.mlp1", LayerKind::kDense, 0, cfg.mlp_units, 1, false, sig});
    add({"scorer.mlp2", LayerKind::kDense, 0, cfg.mlp_units, 1, false, sig});
    add({"scorer.conv2", LayerKind::kConv1D, 0, cfg.conv_channels,
         cfg.conv_width, false, cfg.conv_activation});
  }
  add({"scorer.head", LayerKind::kDense, 0, 1, 1, false, sig});
  return layers;
}

ScorerModel MakeScorer(const ScorerConfig& cfg, std::size_t input_dim,
                       std::uint64_t seed) {
  if (cfg.window_len == 0) throw ValueError("window length must be positive");
  ScorerModel model;
  model.cfg = cfg;
  model.net = Network(ScorerLayers(cfg, input_dim));
  SplitMix64 rng(DeriveSeed(seed, "scorer-init"));
  model.net.InitGlorot(rng);
  model.meta.seed = seed;
  model.meta.best_val_loss = std::numeric_limits<double>::infinity();
  return model;
}

ScorerModel TrainScorer(const std::vector<LabeledSequence>& train,
                        const std::vector<LabeledSequence>& val,
                        const ScorerConfig& cfg) {
  if (train.empty()) throw ValueError("empty training split");
  if (val.empty()) throw ValueError("empty validation split");
  const auto dim = static_cast<std::size_t>(train.front().features.cols());
  std::vector<const LabeledSequence*> tr, va;
  for (const auto& s : train) tr.push_back(&s);
  for (const auto& s : val) va.push_back(&s);
  for (const auto* s : tr) {
    if (static_cast<std::size_t>(s->features.cols()) != dim) {
      throw ShapeError("training sequences differ in feature dimension");
    }
  }
  for (const auto* s : va) {
    if (static_cast<std::size_t>(s->features.cols()) != dim) {
      throw ShapeError("validation features differ in dimension");
    }
  }
  const WindowSet tr_set = WindowsOf(tr, cfg.window_len);
  const WindowSet va_set = WindowsOf(va, cfg.window_len);
  if (tr_set.size() == 0) throw ValueError("no training window fits");
  if (va_set.size() == 0) throw ValueError("no validation window fits");

  ScorerModel model = MakeScorer(cfg, dim, cfg.train.seed);
  const FitResult fit =
      Fit(model.net, tr_set, va_set, Objective::kCenterBce, cfg.train);
  model.meta.epochs_run = fit.epochs_run;
  model.meta.best_val_loss = fit.best_val_loss;
  model.final_train_loss = EvaluateLoss(model.net, tr_set, Objective::kCenterBce,
                                        cfg.train.batch_size);
  return model;
}

ScorerModel TrainScorer(const std::vector<LabeledSequence>& data,
                        const ScorerConfig& cfg) {
  if (data.size() < 2) {
    throw ValueError("need at least two videos for a train/validation split");
  }
  const auto [tr_idx, va_idx] =
      SplitIndices(data.size(), cfg.val_fraction, cfg.train.seed);
  std::vector<LabeledSequence> tr, va;
  for (std::size_t i : tr_idx) tr.push_back(data[i]);
  for (std::size_t i : va_idx) va.push_back(data[i]);
  return TrainScorer(tr, va, cfg);
}

ScoreVector ScoreVideo(const ScorerModel& model, const Mat& features,
                       const std::string& video_id, std::size_t window_len,
                       std::size_t stride, std::size_t batch_size) {
  if (window_len == 0) window_len = model.cfg.window_len;
  const auto t = static_cast<std::size_t>(features.rows());
  if (t < window_len) {
    throw ValueError("sequence of " + std::to_string(t) +
                     " frames is shorter than the window");
  }
  if (static_cast<std::size_t>(features.cols()) != model.net.input_dim()) {
    throw ShapeError("feature dim does not match the scorer input");
  }
  batch_size = std::max<std::size_t>(batch_size, 1);
  const std::vector<std::size_t> starts = WindowStarts(t, window_len, stride);

  WindowSet set;
  set.window_len = window_len;
  set.sequences = {&features};
  for (std::size_t s : starts) {
    set.items.push_back({0, static_cast<std::uint32_t>(s), 0.0});
  }

  ScoreVector out;
  out.video_id = video_id;
  out.scores.assign(t, ScoreVector::kUnscoredFill);
  out.first_scored = starts.front() + window_len / 2;
  out.last_scored = starts.back() + window_len / 2;
  const std::size_t center = window_len / 2;
  std::vector<std::size_t> ids(starts.size());
  std::iota(ids.begin(), ids.end(), 0);
  for (std::size_t at = 0; at < ids.size(); at += batch_size) {
    const std::size_t n = std::min(batch_size, ids.size() - at);
    const std::span<const std::size_t> chunk(ids.data() + at, n);
    const Mat y = model.net.Forward(AssembleBatch(set, chunk), window_len, n);
    for (std::size_t b = 0; b < n; ++b) {
      out.scores[starts[at + b] + center] = y(center * n + b, 0);
    }
  }
  return out;
}

ScoreVector FuseStreams(const ScoreVector& rgb, const ScoreVector& flow) {
  if (rgb.video_id != flow.video_id) {
    throw IdMismatchError("cannot fuse scores of '" + rgb.video_id + "' and '" +
                          flow.video_id + "'");
  }
  if (rgb.scores.size() != flow.scores.size()) {
    throw ShapeError("score vectors differ in length");
  }
  ScoreVector out;
  out.video_id = rgb.video_id;
  out.scores.resize(rgb.scores.size());
  for (std::size_t i = 0; i < out.scores.size(); ++i) {
    out.scores[i] = 0.5 * (rgb.scores[i] + flow.scores[i]);
  }
  out.first_scored = std::min(rgb.first_scored, flow.first_scored);
  out.last_scored = std::max(rgb.last_scored, flow.last_scored);
  return out;
}

std::string FormatScores(const ScoreVector& s) {
  std::string out = "# video_id " + s.video_id + "\n# coverage " +
                    std::to_string(s.first_scored) + " " +
                    std::to_string(s.last_scored) + "\n";
  for (std::size_t i = 0; i < s.scores.size(); ++i) {
    out += std::to_string(i) + " " + FormatReal(s.scores[i]) + "\n";
  }
  return out;
}

ScoreVector ParseScores(std::string_view text) {
  ScoreVector s;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_coverage = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "video_id") {
        ls >> s.video_id;
      } else if (key == "coverage") {
        if (!(ls >> s.first_scored >> s.last_scored)) {
          throw FormatError("bad coverage line in score file");
        }
        have_coverage = true;
      }
      continue;
    }
    std::size_t idx;
    std::string value;
    if (!(ls >> idx >> value) || idx != s.scores.size()) {
      throw FormatError("score lines must be 'index score' in frame order");
    }
    double v;
    const auto r = std::from_chars(value.data(), value.data() + value.size(), v);
    if (r.ec != std::errc() || r.ptr != value.data() + value.size()) {
      throw FormatError("unparsable score '" + value + "'");
    }
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ValueError("score outside [0, 1]");
    }
    s.scores.push_back(v);
  }
  if (s.scores.empty()) throw FormatError("score file holds no frames");
  if (!have_coverage) {
    s.first_scored = 0;
    s.last_scored = s.scores.size() - 1;
  }
  return s;
}

std::string FormatScoresJson(const ScoreVector& s) {
  json j;
  j["video_id"] = s.video_id;
  j["scores"] = s.scores;
  j["coverage"] = {s.first_scored, s.last_scored};
  return j.dump();
}

ScoreVector ParseScoresJson(std::string_view text) {
  try {
    const json j = json::parse(text.begin(), text.end());
    ScoreVector s;
    s.video_id = j.at("video_id").get<std::string>();
    s.scores = j.at("scores").get<std::vector<double>>();
    const auto cov = j.at("coverage").get<std::vector<std::size_t>>();
    if (cov.size() != 2) throw FormatError("coverage must have two entries");
    s.first_scored = cov[0];
    s.last_scored = cov[1];
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("score json: ") + e.what());
  }
}

ModelBundle ToBundle(const ScorerModel& model, Stream stream) {
  ModelBundle b;
  b.variant = model.cfg.variant;
  b.stream = stream;
  b.layer_specs = model.net.specs();
  b.weights = model.net.ExportWeights();
  b.train_meta = model.meta;
  b.settings["scorer.window_len"] = static_cast<double>(model.cfg.window_len);
  return b;
}

ScorerModel ScorerFromBundle(const ModelBundle& bundle) {
  std::vector<LayerSpec> specs;
  for (const LayerSpec& s : bundle.layer_specs) {
    if (s.name.rfind("scorer.", 0) == 0) specs.push_back(s);
  }
  if (specs.empty()) throw FormatError("bundle does not hold a scorer");
  ScorerModel model;
  model.cfg.variant = bundle.variant;
  for (const LayerSpec& s : specs) {
    if (s.name == "scorer.lstm") model.cfg.lstm_hidden = s.out_dim;
    if (s.name == "scorer.conv1") {
      model.cfg.conv_channels = s.out_dim;
      model.cfg.conv_width = s.kernel_width;
      model.cfg.conv_activation = s.activation;
    }
    if (s.name == "scorer.mlp1") model.cfg.mlp_units = s.out_dim;
  }
  if (auto it = bundle.settings.find("scorer.window_len"); it != bundle.settings.end()) {
    model.cfg.window_len = static_cast<std::size_t>(it->second);
  }
  model.net = Network(specs);
  std::map<std::string, Tensor> w;
  for (const auto& [name, t] : bundle.weights) {
    if (name.rfind("scorer.", 0) == 0) w.emplace(name, t);
  }
  model.net.ImportWeights(w);
  model.meta = bundle.train_meta;
  return model;
}

}  // namespace vidsum
