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

#include "vidsum/encdec.h"

#include <limits>

#include "vidsum/errors.h"

namespace vidsum {
namespace {

WindowSet WindowsOf(const std::vector<const Mat*>& seqs, std::size_t window_len,
                    std::size_t stride) {
  WindowSet set;
  set.window_len = window_len;
  set.sequences = seqs;
  for (std::size_t s = 0; s < seqs.size(); ++s) {
    const auto t = static_cast<std::size_t>(seqs[s]->rows());
    if (t < window_len) continue;
    for (std::size_t start : WindowStarts(t, window_len, stride)) {
      set.items.push_back({static_cast<std::uint32_t>(s),
                           static_cast<std::uint32_t>(start), 0.0});
    }
  }
  return set;
}

void CheckDims(const std::vector<Mat>& seqs, std::size_t dim) {
  for (const Mat& m : seqs) {
    if (static_cast<std::size_t>(m.cols()) != dim) {
      throw ShapeError("sequences differ in feature dimension");
    }
  }
}

EncDecModel Train(const std::vector<const Mat*>& train,
                  const std::vector<const Mat*>& val, const EncDecConfig& cfg) {
  const std::size_t dim = static_cast<std::size_t>(train.front()->cols());
  EncDecModel model = MakeEncDec(dim, cfg, cfg.train.seed);
  const WindowSet tr = WindowsOf(train, cfg.window_len, cfg.stride);
  const WindowSet va = WindowsOf(val, cfg.window_len, cfg.stride);
  if (tr.size() == 0 || va.size() == 0) {
    throw ValueError("no window fits in the training or validation split");
  }
  if (cfg.train.epochs == 0) return model;
  const FitResult fit =
      Fit(model.net, tr, va, Objective::kReconstructionMse, cfg.train);
  model.meta.epochs_run = fit.epochs_run;
  model.meta.best_val_loss = fit.best_val_loss;
  return model;
}

}  // namespace

std::vector<LayerSpec> EncDecLayers(std::size_t input_dim,
                                    const EncDecConfig& cfg) {
  const Activation a = cfg.activation;
  return {
      {"encdec.enc0", LayerKind::kDense, input_dim, cfg.hidden_dim, 1, false, a},
      {"encdec.enc1", LayerKind::kDense, cfg.hidden_dim, cfg.latent_dim, 1, false, a},
      {"encdec.enc2", LayerKind::kConv1D, cfg.latent_dim, cfg.latent_dim,
       cfg.conv_width, false, a},
      {"encdec.dec0", LayerKind::kDense, cfg.latent_dim, cfg.hidden_dim, 1, false, a},
      {"encdec.dec1", LayerKind::kDense, cfg.hidden_dim, input_dim, 1, false,
       Activation::kLinear},
  };
}

EncDecModel MakeEncDec(std::size_t input_dim, const EncDecConfig& cfg,
                       std::uint64_t seed) {
  EncDecModel model;
  model.cfg = cfg;
  model.net = Network(EncDecLayers(input_dim, cfg));
  SplitMix64 rng(DeriveSeed(seed, "encdec-init"));
  model.net.InitGlorot(rng);
  model.meta.seed = seed;
  model.meta.best_val_loss = std::numeric_limits<double>::infinity();
  return model;
}

EncDecModel TrainEncDec(const std::vector<Mat>& train_seqs,
                        const std::vector<Mat>& val_seqs,
                        const EncDecConfig& cfg) {
  if (train_seqs.empty() || val_seqs.empty()) {
    throw ValueError("encoder-decoder training needs train and validation data");
  }
  const auto dim = static_cast<std::size_t>(train_seqs.front().cols());
  CheckDims(train_seqs, dim);
  CheckDims(val_seqs, dim);
  std::vector<const Mat*> tr, va;
  for (const Mat& m : train_seqs) tr.push_back(&m);
  for (const Mat& m : val_seqs) va.push_back(&m);
  return Train(tr, va, cfg);
}

EncDecModel TrainEncDec(const std::vector<Mat>& seqs, const EncDecConfig& cfg) {
  if (seqs.empty()) throw ValueError("encoder-decoder training needs data");
  CheckDims(seqs, static_cast<std::size_t>(seqs.front().cols()));
  if (seqs.size() >= 2) {
    const auto [tr_idx, va_idx] =
        SplitIndices(seqs.size(), cfg.val_fraction, cfg.train.seed);
    std::vector<const Mat*> tr, va;
    for (std::size_t i : tr_idx) tr.push_back(&seqs[i]);
    for (std::size_t i : va_idx) va.push_back(&seqs[i]);
    return Train(tr, va, cfg);
  }
  // One sequence: cut it into its windows and split those.
  const SnippetBatch b =
      MakeWindows(seqs.front(), {}, cfg.window_len, cfg.stride);
  return TrainEncDec(b, cfg);
}

EncDecModel TrainEncDec(const SnippetBatch& batch, const EncDecConfig& cfg) {
  if (batch.windows.size() < 2) {
    throw ValueError("need at least two windows to train");
  }
  EncDecConfig c = cfg;
  c.window_len = batch.window_len;
  c.stride = batch.window_len;
  const auto [tr_idx, va_idx] =
      SplitIndices(batch.windows.size(), cfg.val_fraction, cfg.train.seed);
  std::vector<const Mat*> tr, va;
  for (std::size_t i : tr_idx) tr.push_back(&batch.windows[i]);
  for (std::size_t i : va_idx) va.push_back(&batch.windows[i]);
  return Train(tr, va, c);
}

Mat Encode(const EncDecModel& model, const Mat& window) {
  if (static_cast<std::size_t>(window.cols()) != model.input_dim()) {
    throw ShapeError("window dim does not match the encoder input");
  }
  return model.net.Forward(window, window.rows(), 1, nullptr, 0,
                           EncDecModel::kEncoderLayers);
}

Mat Reconstruct(const EncDecModel& model, const Mat& window) {
  if (static_cast<std::size_t>(window.cols()) != model.input_dim()) {
    throw ShapeError("window dim does not match the encoder input");
  }
  return model.net.Forward(window, window.rows(), 1);
}

ModelBundle ToBundle(const EncDecModel& model, Stream stream) {
  ModelBundle b;
  b.variant = Variant::kSummaryNet;
  b.stream = stream;
  b.layer_specs = model.net.specs();
  b.weights = model.net.ExportWeights();
  b.train_meta = model.meta;
  b.settings["encdec.window_len"] = static_cast<double>(model.cfg.window_len);
  b.settings["encdec.stride"] = static_cast<double>(model.cfg.stride);
  return b;
}

EncDecModel EncDecFromBundle(const ModelBundle& bundle) {
  std::vector<LayerSpec> specs;
  for (const LayerSpec& s : bundle.layer_specs) {
    if (s.name.rfind("encdec.", 0) == 0) specs.push_back(s);
  }
  if (specs.size() != 5) {
    throw FormatError("bundle does not hold an encoder-decoder");
  }
  EncDecModel model;
  model.cfg.hidden_dim = specs[0].out_dim;
  model.cfg.latent_dim = specs[1].out_dim;
  model.cfg.conv_width = specs[2].kernel_width;
  model.cfg.activation = specs[0].activation;
  if (auto it = bundle.settings.find("encdec.window_len"); it != bundle.settings.end()) {
    model.cfg.window_len = static_cast<std::size_t>(it->second);
  }
  if (auto it = bundle.settings.find("encdec.stride"); it != bundle.settings.end()) {
    model.cfg.stride = static_cast<std::size_t>(it->second);
  }
  model.net = Network(specs);
  std::map<std::string, Tensor> w;
  for (const auto& [name, t] : bundle.weights) {
    if (name.rfind("encdec.", 0) == 0) w.emplace(name, t);
  }
  model.net.ImportWeights(w);
  model.meta = bundle.train_meta;
  return model;
}

}  // namespace vidsum
