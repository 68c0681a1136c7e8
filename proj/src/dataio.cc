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

#include "vidsum/dataio.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "vidsum/errors.h"

namespace vidsum {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr char kFseqMagic[4] = {'F', 'S', 'E', 'Q'};
constexpr std::uint32_t kFseqVersion = 1;
constexpr std::size_t kFseqHeaderBytes = 4 + 4 + 8 + 8 + 4 + 4;
constexpr char kModelMagic[4] = {'V', 'S', 'M', 'B'};
constexpr std::uint32_t kModelVersion = 1;

template <typename U>
void PutLe(std::string& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

template <typename U>
U GetLe(std::string_view bytes, std::size_t at) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    v |= static_cast<U>(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
  }
  return v;
}

void PutF32(std::string& out, float f) {
  PutLe(out, std::bit_cast<std::uint32_t>(f));
}
void PutF64(std::string& out, double d) {
  PutLe(out, std::bit_cast<std::uint64_t>(d));
}
float GetF32(std::string_view b, std::size_t at) {
  return std::bit_cast<float>(GetLe<std::uint32_t>(b, at));
}
double GetF64(std::string_view b, std::size_t at) {
  return std::bit_cast<double>(GetLe<std::uint64_t>(b, at));
}

json ParseJson(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

// Runs `fn`, converting nlohmann type/key errors into FormatError.
template <typename Fn>
auto WithJsonErrors(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

std::string VideoIdFromPath(const fs::path& path) {
  const std::string name = path.filename().string();
  return name.substr(0, name.find('.'));
}

}  // namespace

std::string_view ToString(Stream s) {
  return s == Stream::kRgb ? "rgb" : "flow";
}

Stream ParseStream(std::string_view s) {
  if (s == "rgb") return Stream::kRgb;
  if (s == "flow") return Stream::kFlow;
  throw ValueError("unknown stream '" + std::string(s) + "'");
}

std::string_view ToString(Variant v) {
  switch (v) {
    case Variant::kBaseline: return "baseline";
    case Variant::kConvNet: return "convnet";
    case Variant::kConvLstm: return "convlstm";
    case Variant::kSummaryNet: return "summarynet";
  }
  return "?";
}

Variant ParseVariant(std::string_view s) {
  if (s == "baseline") return Variant::kBaseline;
  if (s == "convnet") return Variant::kConvNet;
  if (s == "convlstm") return Variant::kConvLstm;
  if (s == "summarynet") return Variant::kSummaryNet;
  throw ValueError("unknown variant '" + std::string(s) + "'");
}

// ---------------------------------------------------------------- files

std::string ReadFileBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return std::move(ss).str();
}

void WriteFileAtomic(const fs::path& path, std::string_view bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move temp file onto '" + path.string() + "'");
  }
}

// ---------------------------------------------------------------- features

bool FeatureSequence::operator==(const FeatureSequence& o) const {
  if (video_id != o.video_id || stream != o.stream ||
      std::bit_cast<std::uint32_t>(fps) != std::bit_cast<std::uint32_t>(o.fps) ||
      frames.rows() != o.frames.rows() || frames.cols() != o.frames.cols()) {
    return false;
  }
  return std::memcmp(frames.data(), o.frames.data(),
                     sizeof(float) * frames.size()) == 0;
}

void Validate(const FeatureSequence& seq) {
  if (seq.frames.rows() < 1 || seq.frames.cols() < 1) {
    throw ValueError("feature sequence must have T >= 1 and D >= 1");
  }
  if (!(seq.fps > 0.0f) || !std::isfinite(seq.fps)) {
    throw ValueError("feature sequence fps must be positive and finite");
  }
  const float* p = seq.frames.data();
  const bool flow = seq.stream == Stream::kFlow;
  for (Eigen::Index i = 0; i < seq.frames.size(); ++i) {
    if (!std::isfinite(p[i])) {
      throw ValueError("non-finite value in feature payload");
    }
    if (flow && (p[i] < 0.0f || p[i] > 1.0f)) {
      throw ValueError("FLOW feature outside [0, 1]");
    }
  }
}

std::string EncodeFeatures(const FeatureSequence& seq) {
  std::string out;
  out.reserve(kFseqHeaderBytes + 4 * seq.frames.size());
  out.append(kFseqMagic, 4);
  PutLe<std::uint32_t>(out, kFseqVersion);
  PutLe<std::uint64_t>(out, seq.frames.rows());
  PutLe<std::uint64_t>(out, seq.frames.cols());
  PutF32(out, seq.fps);
  out.push_back(static_cast<char>(seq.stream));
  out.append(3, '\0');
  const float* p = seq.frames.data();
  for (Eigen::Index i = 0; i < seq.frames.size(); ++i) PutF32(out, p[i]);
  return out;
}

FeatureSequence DecodeFeatures(std::string_view b) {
  if (b.size() < kFseqHeaderBytes) throw FormatError("FSEQ header truncated");
  if (std::memcmp(b.data(), kFseqMagic, 4) != 0) {
    throw FormatError("bad FSEQ magic");
  }
  if (GetLe<std::uint32_t>(b, 4) != kFseqVersion) {
    throw FormatError("unsupported FSEQ version");
  }
  const std::uint64_t t = GetLe<std::uint64_t>(b, 8);
  const std::uint64_t d = GetLe<std::uint64_t>(b, 16);
  const float fps = GetF32(b, 24);
  const std::uint8_t stream = static_cast<std::uint8_t>(b[28]);
  if (stream > 1) throw FormatError("bad FSEQ stream tag");
  if (b[29] != 0 || b[30] != 0 || b[31] != 0) {
    throw FormatError("nonzero FSEQ padding");
  }
  if (t == 0 || d == 0) throw FormatError("FSEQ shape has a zero dimension");
  const std::uint64_t payload = b.size() - kFseqHeaderBytes;
  if (d > payload / 4 || t > payload / 4 / d || t * d * 4 != payload) {
    throw FormatError("FSEQ payload length does not match T x D");
  }
  FeatureSequence seq;
  seq.stream = static_cast<Stream>(stream);
  seq.fps = fps;
  seq.frames.resize(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(d));
  float* p = seq.frames.data();
  for (std::uint64_t i = 0; i < t * d; ++i) {
    p[i] = GetF32(b, kFseqHeaderBytes + 4 * i);
  }
  Validate(seq);
  return seq;
}

FeatureSequence ReadFeatures(const fs::path& path) {
  FeatureSequence seq = DecodeFeatures(ReadFileBytes(path));
  seq.video_id = VideoIdFromPath(path);
  return seq;
}

void WriteFeatures(const FeatureSequence& seq, const fs::path& path) {
  Validate(seq);
  WriteFileAtomic(path, EncodeFeatures(seq));
}

// ---------------------------------------------------------------- annotations

void Validate(const AnnotationSet& ann) {
  if (ann.users.empty()) throw ValueError("annotation set has no users");
  if (ann.n_frames == 0) throw ValueError("annotation set has zero frames");
  if (!(ann.fps > 0.0) || !std::isfinite(ann.fps)) {
    throw ValueError("annotation fps must be positive and finite");
  }
  for (const auto& u : ann.users) {
    if (u.size() != ann.n_frames) {
      throw FormatError("user score vector length differs from n_frames");
    }
    for (double s : u) {
      if (!std::isfinite(s) || s < 0.0) {
        throw ValueError("user scores must be finite and non-negative");
      }
    }
  }
}

AnnotationSet ParseAnnotations(std::string_view text) {
  const json j = ParseJson(text, "annotations");
  AnnotationSet ann = WithJsonErrors("annotations", [&] {
    AnnotationSet a;
    a.video_id = j.at("video_id").get<std::string>();
    a.fps = j.at("fps").get<double>();
    const json& n = j.at("n_frames");
    if (!n.is_number_unsigned()) throw FormatError("n_frames must be a count");
    a.n_frames = n.get<std::size_t>();
    for (const json& u : j.at("users")) {
      a.users.push_back(u.get<std::vector<double>>());
    }
    return a;
  });
  Validate(ann);
  return ann;
}

std::string FormatAnnotations(const AnnotationSet& ann) {
  json j;
  j["video_id"] = ann.video_id;
  j["fps"] = ann.fps;
  j["n_frames"] = ann.n_frames;
  j["users"] = ann.users;
  return j.dump();
}

AnnotationSet ReadAnnotations(const fs::path& path) {
  return ParseAnnotations(ReadFileBytes(path));
}

void WriteAnnotations(const AnnotationSet& ann, const fs::path& path) {
  Validate(ann);
  WriteFileAtomic(path, FormatAnnotations(ann));
}

// ---------------------------------------------------------------- manifest

fs::path DatasetManifest::Resolve(const std::string& p) const {
  const fs::path q(p);
  return q.is_absolute() ? q : base_dir / q;
}

void Validate(const DatasetManifest& m, bool check_files) {
  std::set<std::string> ids;
  for (const auto& e : m.entries) {
    if (e.video_id.empty()) throw ValueError("manifest entry without video_id");
    if (!ids.insert(e.video_id).second) {
      throw ValueError("duplicate video_id '" + e.video_id + "' in manifest");
    }
    if (!check_files) continue;
    std::vector<std::string> paths = {e.path_rgb, e.path_annotations};
    if (e.path_flow) paths.push_back(*e.path_flow);
    for (const auto& p : paths) {
      if (!fs::exists(m.Resolve(p))) {
        throw IoError("manifest references missing file '" + p + "'");
      }
    }
  }
}

DatasetManifest ParseManifest(std::string_view text) {
  const json j = ParseJson(text, "manifest");
  return WithJsonErrors("manifest", [&] {
    if (!j.is_array()) throw FormatError("manifest must be an array");
    DatasetManifest m;
    for (const json& e : j) {
      ManifestEntry entry;
      entry.video_id = e.at("video_id").get<std::string>();
      entry.path_rgb = e.at("path_rgb").get<std::string>();
      entry.path_annotations = e.at("path_annotations").get<std::string>();
      if (e.contains("path_flow") && !e["path_flow"].is_null()) {
        entry.path_flow = e["path_flow"].get<std::string>();
      }
      if (e.contains("category") && !e["category"].is_null()) {
        entry.category = e["category"].get<std::string>();
      }
      m.entries.push_back(std::move(entry));
    }
    return m;
  });
}

std::string FormatManifest(const DatasetManifest& m) {
  json j = json::array();
  for (const auto& e : m.entries) {
    json o;
    o["video_id"] = e.video_id;
    o["path_rgb"] = e.path_rgb;
    if (e.path_flow) o["path_flow"] = *e.path_flow;
    o["path_annotations"] = e.path_annotations;
    if (e.category) o["category"] = *e.category;
    j.push_back(std::move(o));
  }
  return j.dump(1);
}

DatasetManifest ReadManifest(const fs::path& path) {
  DatasetManifest m = ParseManifest(ReadFileBytes(path));
  m.base_dir = path.parent_path();
  Validate(m, /*check_files=*/true);
  return m;
}

void WriteManifest(const DatasetManifest& m, const fs::path& path) {
  Validate(m, /*check_files=*/false);
  WriteFileAtomic(path, FormatManifest(m));
}

// ---------------------------------------------------------------- models

void Validate(const ModelBundle& bundle) {
  std::set<std::string> expected;
  for (const LayerSpec& spec : bundle.layer_specs) {
    ValidateLayerSpec(spec);
    for (const auto& [name, shape] : ExpectedParameters(spec)) {
      auto it = bundle.weights.find(name);
      if (it == bundle.weights.end()) {
        throw FormatError("bundle lacks weight '" + name + "'");
      }
      if (it->second.shape != shape || it->second.data.size() != it->second.size()) {
        throw FormatError("weight '" + name + "' has the wrong shape");
      }
      for (double v : it->second.data) {
        if (!std::isfinite(v)) {
          throw ValueError("weight '" + name + "' holds a non-finite value");
        }
      }
      expected.insert(name);
    }
  }
  if (expected.size() != bundle.weights.size()) {
    throw FormatError("bundle holds weights no layer owns");
  }
}

std::string EncodeModel(const ModelBundle& bundle) {
  Validate(bundle);
  json header;
  header["variant"] = ToString(bundle.variant);
  header["stream"] = ToString(bundle.stream);
  json layers = json::array();
  for (const LayerSpec& s : bundle.layer_specs) {
    layers.push_back({{"name", s.name},
                      {"kind", ToString(s.kind)},
                      {"in_dim", s.in_dim},
                      {"out_dim", s.out_dim},
                      {"kernel_width", s.kernel_width},
                      {"bidirectional", s.bidirectional},
                      {"activation", ToString(s.activation)}});
  }
  header["layers"] = std::move(layers);
  json meta;
  meta["epochs_run"] = bundle.train_meta.epochs_run;
  if (std::isfinite(bundle.train_meta.best_val_loss)) {
    meta["best_val_loss"] = bundle.train_meta.best_val_loss;
  } else {
    meta["best_val_loss"] = nullptr;
  }
  meta["seed"] = bundle.train_meta.seed;
  header["train_meta"] = std::move(meta);
  header["settings"] = bundle.settings;
  json weights = json::array();
  std::uint64_t offset = 0;
  for (const auto& [name, t] : bundle.weights) {
    weights.push_back({{"name", name}, {"shape", t.shape}, {"offset", offset}});
    offset += 8 * t.data.size();
  }
  header["weights"] = std::move(weights);
  const std::string text = header.dump();

  std::string out;
  out.append(kModelMagic, 4);
  PutLe<std::uint32_t>(out, kModelVersion);
  PutLe<std::uint64_t>(out, text.size());
  out += text;
  for (const auto& [name, t] : bundle.weights) {
    for (double v : t.data) PutF64(out, v);
  }
  return out;
}

ModelBundle DecodeModel(std::string_view b) {
  if (b.size() < 16) throw FormatError("model header truncated");
  if (std::memcmp(b.data(), kModelMagic, 4) != 0) {
    throw FormatError("bad model magic");
  }
  if (GetLe<std::uint32_t>(b, 4) != kModelVersion) {
    throw FormatError("unsupported model version");
  }
  const std::uint64_t header_len = GetLe<std::uint64_t>(b, 8);
  if (header_len > b.size() - 16) throw FormatError("model header truncated");
  const json header = ParseJson(b.substr(16, header_len), "model header");
  const std::string_view blob = b.substr(16 + header_len);

  ModelBundle bundle = WithJsonErrors("model header", [&] {
    ModelBundle m;
    m.variant = ParseVariant(header.at("variant").get<std::string>());
    m.stream = ParseStream(header.at("stream").get<std::string>());
    for (const json& l : header.at("layers")) {
      LayerSpec s;
      s.name = l.at("name").get<std::string>();
      s.kind = ParseLayerKind(l.at("kind").get<std::string>());
      s.in_dim = l.at("in_dim").get<std::size_t>();
      s.out_dim = l.at("out_dim").get<std::size_t>();
      s.kernel_width = l.at("kernel_width").get<std::size_t>();
      s.bidirectional = l.at("bidirectional").get<bool>();
      s.activation = ParseActivation(l.at("activation").get<std::string>());
      m.layer_specs.push_back(std::move(s));
    }
    const json& meta = header.at("train_meta");
    m.train_meta.epochs_run = meta.at("epochs_run").get<int>();
    m.train_meta.best_val_loss =
        meta.at("best_val_loss").is_null()
            ? std::numeric_limits<double>::infinity()
            : meta.at("best_val_loss").get<double>();
    m.train_meta.seed = meta.at("seed").get<std::uint64_t>();
    m.settings = header.at("settings").get<std::map<std::string, double>>();
    std::uint64_t expected_offset = 0;
    for (const json& w : header.at("weights")) {
      Tensor t;
      t.shape = w.at("shape").get<std::vector<std::size_t>>();
      const std::uint64_t offset = w.at("offset").get<std::uint64_t>();
      const std::size_t n = t.size();
      if (offset != expected_offset || n > (blob.size() - std::min<std::uint64_t>(offset, blob.size())) / 8) {
        throw FormatError("weight blob truncated or misaligned");
      }
      t.data.resize(n);
      for (std::size_t i = 0; i < n; ++i) t.data[i] = GetF64(blob, offset + 8 * i);
      expected_offset = offset + 8 * n;
      m.weights.emplace(w.at("name").get<std::string>(), std::move(t));
    }
    if (expected_offset != blob.size()) {
      throw FormatError("weight blob length does not match header");
    }
    return m;
  });
  Validate(bundle);
  return bundle;
}

ModelBundle LoadModel(const fs::path& path) {
  return DecodeModel(ReadFileBytes(path));
}

void SaveModel(const ModelBundle& bundle, const fs::path& path) {
  WriteFileAtomic(path, EncodeModel(bundle));
}

}  // namespace vidsum
