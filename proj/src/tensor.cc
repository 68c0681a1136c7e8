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

#include "vidsum/tensor.h"

#include <functional>
#include <numeric>

#include "vidsum/errors.h"

namespace vidsum {

std::size_t Tensor::size() const {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

Tensor ToTensor(const Mat& m) {
  Tensor t;
  t.shape = {static_cast<std::size_t>(m.rows()),
             static_cast<std::size_t>(m.cols())};
  t.data.resize(m.size());
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) t.data[k++] = m(r, c);
  }
  return t;
}

Mat FromTensor(const Tensor& t) {
  if (t.shape.empty()) throw ShapeError("tensor has no dimensions");
  if (t.size() != t.data.size()) {
    throw ShapeError("tensor data length does not match its shape");
  }
  const std::size_t cols = t.shape.back();
  const std::size_t rows = cols == 0 ? 0 : t.data.size() / cols;
  Mat m(rows, cols);
  std::size_t k = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = t.data[k++];
  }
  return m;
}

std::string_view ToString(LayerKind kind) {
  switch (kind) {
    case LayerKind::kDense: return "dense";
    case LayerKind::kConv1D: return "conv1d";
    case LayerKind::kLstm: return "lstm";
  }
  return "?";
}

std::string_view ToString(Activation act) {
  switch (act) {
    case Activation::kLinear: return "linear";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kReLU: return "relu";
    case Activation::kTanh: return "tanh";
  }
  return "?";
}

LayerKind ParseLayerKind(std::string_view s) {
  if (s == "dense") return LayerKind::kDense;
  if (s == "conv1d") return LayerKind::kConv1D;
  if (s == "lstm") return LayerKind::kLstm;
  throw FormatError("unknown layer kind '" + std::string(s) + "'");
}

Activation ParseActivation(std::string_view s) {
  if (s == "linear") return Activation::kLinear;
  if (s == "sigmoid") return Activation::kSigmoid;
  if (s == "relu") return Activation::kReLU;
  if (s == "tanh") return Activation::kTanh;
  throw FormatError("unknown activation '" + std::string(s) + "'");
}

void ValidateLayerSpec(const LayerSpec& spec) {
  if (spec.in_dim == 0 || spec.out_dim == 0) {
    throw ValueError("layer '" + spec.name + "' has a zero dimension");
  }
  if (spec.kind == LayerKind::kConv1D &&
      (spec.kernel_width == 0 || spec.kernel_width % 2 == 0)) {
    throw ValueError("layer '" + spec.name + "' needs an odd kernel width");
  }
}

std::vector<std::pair<std::string, std::vector<std::size_t>>>
ExpectedParameters(const LayerSpec& spec) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
  const std::string& n = spec.name;
  switch (spec.kind) {
    case LayerKind::kDense:
      out.push_back({n + ".W", {spec.in_dim, spec.out_dim}});
      out.push_back({n + ".b", {spec.out_dim}});
      break;
    case LayerKind::kConv1D:
      out.push_back({n + ".W", {spec.kernel_width, spec.in_dim, spec.out_dim}});
      out.push_back({n + ".b", {spec.out_dim}});
      break;
    case LayerKind::kLstm: {
      const std::size_t h = spec.out_dim;
      for (const char* dir : {"fwd", "bwd"}) {
        if (std::string_view(dir) == "bwd" && !spec.bidirectional) break;
        const std::string p = n + "." + dir;
        out.push_back({p + ".Wx", {spec.in_dim, 4 * h}});
        out.push_back({p + ".Wh", {h, 4 * h}});
        out.push_back({p + ".b", {4 * h}});
      }
      break;
    }
  }
  return out;
}

}  // namespace vidsum
