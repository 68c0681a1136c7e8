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

#ifndef VIDSUM_DATAIO_H_
#define VIDSUM_DATAIO_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vidsum/tensor.h"

namespace vidsum {

enum class Stream : std::uint8_t { kRgb = 0, kFlow = 1 };

std::string_view ToString(Stream s);
Stream ParseStream(std::string_view s);

// Per-frame features, frame-major. Values are stored exactly as on disk.
using FrameMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct FeatureSequence {
  std::string video_id;
  Stream stream = Stream::kRgb;
  float fps = 0.0f;  // rate after any subsampling
  FrameMatrix frames;

  std::size_t num_frames() const { return frames.rows(); }
  std::size_t dim() const { return frames.cols(); }
  // Features widened to double for compute.
  Mat AsDouble() const { return frames.cast<double>(); }

  bool operator==(const FeatureSequence& o) const;
};

// Throws ValueError if `seq` breaks a FeatureSequence invariant: empty shape,
// non-positive fps, non-finite values, or FLOW values outside [0, 1].
void Validate(const FeatureSequence& seq);

// FSEQ1 container (little-endian):
//   "FSEQ" | u32 version=1 | u64 T | u64 D | f32 fps | u8 stream | 3 x 0x00 |
//   T*D f32 payload, frame-major.
// The returned video_id is the file name up to its first '.'.
FeatureSequence ReadFeatures(const std::filesystem::path& path);
void WriteFeatures(const FeatureSequence& seq,
                   const std::filesystem::path& path);

// Serialized FSEQ1 bytes; WriteFeatures writes exactly this.
std::string EncodeFeatures(const FeatureSequence& seq);
FeatureSequence DecodeFeatures(std::string_view bytes);

struct AnnotationSet {
  std::string video_id;
  double fps = 0.0;
  std::size_t n_frames = 0;
  std::vector<std::vector<double>> users;

  bool operator==(const AnnotationSet&) const = default;
};

void Validate(const AnnotationSet& ann);
AnnotationSet ReadAnnotations(const std::filesystem::path& path);
void WriteAnnotations(const AnnotationSet& ann,
                      const std::filesystem::path& path);
AnnotationSet ParseAnnotations(std::string_view text);
std::string FormatAnnotations(const AnnotationSet& ann);

struct ManifestEntry {
  std::string video_id;
  std::string path_rgb;
  std::optional<std::string> path_flow;
  std::string path_annotations;
  std::optional<std::string> category;

  bool operator==(const ManifestEntry&) const = default;
};

// Relative paths inside a manifest are resolved against `base_dir`, the
// directory holding the manifest file.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::filesystem::path base_dir;

  std::filesystem::path Resolve(const std::string& p) const;
  bool operator==(const DatasetManifest& o) const {
    return entries == o.entries;
  }
};

// Checks unique ids and, when `check_files`, that every referenced file
// exists (IoError otherwise).
void Validate(const DatasetManifest& m, bool check_files);
DatasetManifest ReadManifest(const std::filesystem::path& path);
void WriteManifest(const DatasetManifest& m,
                   const std::filesystem::path& path);
DatasetManifest ParseManifest(std::string_view text);
std::string FormatManifest(const DatasetManifest& m);

enum class Variant { kBaseline, kConvNet, kConvLstm, kSummaryNet };

std::string_view ToString(Variant v);
Variant ParseVariant(std::string_view s);

struct TrainMeta {
  int epochs_run = 0;
  double best_val_loss = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const TrainMeta&) const = default;
};

// Every learned parameter of one stream's model. SummaryNet bundles hold the
// encoder-decoder layers (names prefixed "encdec.") ahead of the scorer layers
// (prefixed "scorer.").
struct ModelBundle {
  Variant variant = Variant::kBaseline;
  Stream stream = Stream::kRgb;
  std::vector<LayerSpec> layer_specs;
  std::map<std::string, Tensor> weights;
  TrainMeta train_meta;
  // Free-form settings the model needs at inference (window lengths etc).
  std::map<std::string, double> settings;

  bool operator==(const ModelBundle&) const = default;
};

// Shapes must match ExpectedParameters of every layer and values be finite.
void Validate(const ModelBundle& bundle);

// Bundle file: "VSMB" | u32 version=1 | u64 header_len | JSON header |
// f64 little-endian weight blob. The header lists layer specs, meta and, per
// weight, its name, shape and byte offset into the blob.
ModelBundle LoadModel(const std::filesystem::path& path);
void SaveModel(const ModelBundle& bundle, const std::filesystem::path& path);
std::string EncodeModel(const ModelBundle& bundle);
ModelBundle DecodeModel(std::string_view bytes);

// Whole-file helpers. WriteFileAtomic writes to a sibling temp file and
// renames it into place.
std::string ReadFileBytes(const std::filesystem::path& path);
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view bytes);

}  // namespace vidsum

#endif  // VIDSUM_DATAIO_H_
