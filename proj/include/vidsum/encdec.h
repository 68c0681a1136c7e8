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

#ifndef VIDSUM_ENCDEC_H_
#define VIDSUM_ENCDEC_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vidsum/dataio.h"
#include "vidsum/preprocess.h"
#include "vidsum/tensornet.h"

namespace vidsum {

struct EncDecConfig {
  std::size_t hidden_dim = 1024;
  std::size_t latent_dim = 512;
  std::size_t conv_width = 3;
  Activation activation = Activation::kTanh;  // every layer but the output
  std::size_t window_len = 16;
  std::size_t stride = 4;
  double val_fraction = 0.2;
  TrainConfig train;
};

// Encoder: Dense(D->hidden), Dense(hidden->latent), Conv1D(latent->latent)
// along time. Decoder: Dense(latent->hidden), Dense(hidden->D, linear).
struct EncDecModel {
  static constexpr std::size_t kEncoderLayers = 3;

  EncDecConfig cfg;
  Network net;
  TrainMeta meta;

  std::size_t input_dim() const { return net.input_dim(); }
  std::size_t latent_dim() const { return net.specs()[kEncoderLayers - 1].out_dim; }
};

std::vector<LayerSpec> EncDecLayers(std::size_t input_dim,
                                    const EncDecConfig& cfg);

// Freshly initialized model; weights drawn from a sub-seed of `seed`.
EncDecModel MakeEncDec(std::size_t input_dim, const EncDecConfig& cfg,
                       std::uint64_t seed);

// Minimizes reconstruction MSE over windows of the training sequences and
// keeps the epoch with the lowest validation MSE.
EncDecModel TrainEncDec(const std::vector<Mat>& train_seqs,
                        const std::vector<Mat>& val_seqs,
                        const EncDecConfig& cfg);

// Splits `seqs` by sequence (or, for a single sequence, by window) using
// cfg.val_fraction and trains.
EncDecModel TrainEncDec(const std::vector<Mat>& seqs, const EncDecConfig& cfg);

// Treats every window of `batch` as its own sequence.
EncDecModel TrainEncDec(const SnippetBatch& batch, const EncDecConfig& cfg);

// Encoder forward pass over a W x D window (or a whole sequence); returns
// W x latent_dim.
Mat Encode(const EncDecModel& model, const Mat& window);

// Full encoder-decoder pass; returns W x D.
Mat Reconstruct(const EncDecModel& model, const Mat& window);

// Bundle round-trip. Layers keep their "encdec." names.
ModelBundle ToBundle(const EncDecModel& model, Stream stream);
EncDecModel EncDecFromBundle(const ModelBundle& bundle);

}  // namespace vidsum

#endif  // VIDSUM_ENCDEC_H_
