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

#include "vidsum/pipeline.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>

#include "vidsum/errors.h"
#include "vidsum/preprocess.h"

namespace vidsum {

const Mat& PreparedVideo::Features(Stream s) const {
  if (s == Stream::kFlow) {
    if (!flow) throw ValueError("video '" + video_id + "' has no flow stream");
    return *flow;
  }
  return rgb;
}

PreparedVideo PrepareVideo(const DatasetManifest& manifest,
                           const ManifestEntry& entry, const RunConfig& cfg,
                           bool need_flow) {
  FeatureSequence rgb = ReadFeatures(manifest.Resolve(entry.path_rgb));
  rgb.video_id = entry.video_id;
  const AnnotationSet ann = ReadAnnotations(manifest.Resolve(entry.path_annotations));
  if (ann.n_frames != rgb.num_frames()) {
    throw ValueError("annotations of '" + entry.video_id + "' cover " +
                     std::to_string(ann.n_frames) + " frames but features " +
                     std::to_string(rgb.num_frames()));
  }
  const BinarizedTargets gt = ConsolidateTargets(ann, MakeConsolidationConfig(cfg));

  PreparedVideo v;
  v.video_id = entry.video_id;
  v.category = entry.category;
  v.source_frames = rgb.num_frames();
  auto [rgb_sub, targets] = Subsample(rgb, gt.labels, cfg.target_fps);
  v.fps = rgb_sub.fps;
  v.rgb = rgb_sub.AsDouble();
  v.targets = std::move(targets);
  if (need_flow) {
    if (!entry.path_flow) {
      throw ValueError("video '" + entry.video_id + "' has no flow features");
    }
    FeatureSequence flow = ReadFeatures(manifest.Resolve(*entry.path_flow));
    if (flow.num_frames() != rgb.num_frames()) {
      throw ShapeError("RGB and flow streams of '" + entry.video_id +
                       "' differ in length");
    }
    v.flow = Subsample(flow, {}, cfg.target_fps).first.AsDouble();
  }
  return v;
}

Mat StreamModel::ModelInput(const Mat& features) const {
  return encdec ? Encode(*encdec, features) : features;
}

ScoreVector StreamModel::Score(const Mat& features,
                               const std::string& video_id) const {
  return ScoreVideo(scorer, ModelInput(features), video_id);
}

EncDecModel TrainEncDecOn(const std::vector<const PreparedVideo*>& videos,
                          Stream stream, const RunConfig& cfg,
                          std::uint64_t seed) {
  std::vector<Mat> seqs;
  for (const PreparedVideo* v : videos) seqs.push_back(v->Features(stream));
  return TrainEncDec(seqs, MakeEncDecConfig(cfg, DeriveSeed(seed, "encdec")));
}

StreamModel TrainStreamModel(const std::vector<const PreparedVideo*>& videos,
                             Stream stream, const RunConfig& cfg,
                             std::uint64_t seed) {
  if (videos.size() < 2) throw ValueError("need at least two training videos");
  StreamModel model;
  model.stream = stream;
  if (cfg.variant == Variant::kSummaryNet) {
    model.encdec = TrainEncDecOn(videos, stream, cfg, seed);
  }
  std::vector<LabeledSequence> data;
  for (const PreparedVideo* v : videos) {
    data.push_back({v->video_id, model.ModelInput(v->Features(stream)), v->targets});
  }
  model.scorer = TrainScorer(data, MakeScorerConfig(cfg, DeriveSeed(seed, "scorer")));
  return model;
}

ModelBundle ToBundle(const StreamModel& model) {
  ModelBundle b = ToBundle(model.scorer, model.stream);
  if (model.encdec) {
    const ModelBundle e = ToBundle(*model.encdec, model.stream);
    std::vector<LayerSpec> specs = e.layer_specs;
    specs.insert(specs.end(), b.layer_specs.begin(), b.layer_specs.end());
    b.layer_specs = std::move(specs);
    b.weights.insert(e.weights.begin(), e.weights.end());
    b.settings.insert(e.settings.begin(), e.settings.end());
    b.settings["encdec.best_val_loss"] = e.train_meta.best_val_loss;
    b.settings["encdec.epochs_run"] = e.train_meta.epochs_run;
  }
  return b;
}

StreamModel StreamModelFromBundle(const ModelBundle& bundle) {
  StreamModel m;
  m.stream = bundle.stream;
  m.scorer = ScorerFromBundle(bundle);
  if (bundle.variant == Variant::kSummaryNet) {
    m.encdec = EncDecFromBundle(bundle);
    if (auto it = bundle.settings.find("encdec.best_val_loss"); it != bundle.settings.end()) {
      m.encdec->meta.best_val_loss = it->second;
    }
    if (auto it = bundle.settings.find("encdec.epochs_run"); it != bundle.settings.end()) {
      m.encdec->meta.epochs_run = static_cast<int>(it->second);
    }
  }
  return m;
}

ScoreVector ScoreWithModels(const std::vector<const StreamModel*>& models,
                            const PreparedVideo& video) {
  if (models.empty()) throw ValueError("no stream model to score with");
  ScoreVector s = models.front()->Score(video.Features(models.front()->stream),
                                        video.video_id);
  for (std::size_t i = 1; i < models.size(); ++i) {
    s = FuseStreams(s, models[i]->Score(video.Features(models[i]->stream),
                                        video.video_id));
  }
  return s;
}

Segmentation SegmentVideo(const PreparedVideo& video, const RunConfig& cfg) {
  return Segment(video.Features(cfg.kts_stream), video.fps,
                 MakeKtsConfig(cfg, video.fps), video.video_id);
}

std::string Sha256Hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace vidsum
