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

#ifndef VIDSUM_TENSOR_H_
#define VIDSUM_TENSOR_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace vidsum {

// Dense double matrix used for all training and inference math.
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Shaped real array in row-major order. Used where parameters leave the
// numeric core (model bundles, bindings).
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  std::size_t size() const;
  bool operator==(const Tensor&) const = default;
};

// Converts a matrix to a rank-2 row-major tensor and back.
Tensor ToTensor(const Mat& m);
// Interprets `t` as rows x cols where cols is the last dimension.
Mat FromTensor(const Tensor& t);

enum class LayerKind { kDense, kConv1D, kLstm };
enum class Activation { kLinear, kSigmoid, kReLU, kTanh };

std::string_view ToString(LayerKind kind);
std::string_view ToString(Activation act);
LayerKind ParseLayerKind(std::string_view s);
Activation ParseActivation(std::string_view s);

// One layer of a sequential network.
//
// For LSTM layers `out_dim` is the hidden size per direction; a bidirectional
// layer produces 2 * out_dim features per step. Conv1D runs along time with
// stride 1 and symmetric zero padding, so `kernel_width` must be odd.
struct LayerSpec {
  std::string name;
  LayerKind kind = LayerKind::kDense;
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::size_t kernel_width = 1;
  bool bidirectional = false;
  Activation activation = Activation::kLinear;

  std::size_t OutputDim() const {
    return kind == LayerKind::kLstm && bidirectional ? 2 * out_dim : out_dim;
  }
  bool operator==(const LayerSpec&) const = default;
};

// Throws ValueError unless dims are positive and conv widths odd.
void ValidateLayerSpec(const LayerSpec& spec);

// Names and shapes of the parameters a layer owns, in canonical order.
// Dense: W [in,out], b [out]. Conv1D: W [k,in,out], b [out].
// LSTM per direction d in {fwd,bwd}: d.Wx [in,4H], d.Wh [H,4H], d.b [4H],
// gate blocks ordered input, forget, candidate, output.
std::vector<std::pair<std::string, std::vector<std::size_t>>>
ExpectedParameters(const LayerSpec& spec);

}  // namespace vidsum

#endif  // VIDSUM_TENSOR_H_
