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

#ifndef VIDSUM_TENSORNET_H_
#define VIDSUM_TENSORNET_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vidsum/rng.h"
#include "vidsum/tensor.h"

namespace vidsum {

// A batch of equal-length sequences stored time-major: row t * batch + b holds
// step t of sequence b. Conv taps and LSTM steps then address contiguous row
// ranges.
struct SeqBatch {
  Mat data;
  std::size_t steps = 0;
  std::size_t batch = 0;
};

struct Param {
  std::string name;
  Mat value;
};

// Per-layer activations kept by a forward pass for the backward pass.
struct LayerCache {
  Mat input;
  Mat output;
  std::vector<Mat> aux;
};

struct ForwardCache {
  std::vector<LayerCache> layers;
  std::size_t steps = 0;
  std::size_t batch = 0;
};

// Sequential stack of Dense / Conv1D / LSTM layers with explicit backprop.
// A const Network is safe to run Forward on from several threads.
class Network {
 public:
  static constexpr std::size_t kAll = std::numeric_limits<std::size_t>::max();

  Network() = default;
  // Builds the layer stack with all parameters zero. Consecutive layers must
  // agree on dimensions (ShapeError otherwise).
  explicit Network(std::vector<LayerSpec> specs);

  // Glorot-uniform weights, zero biases, LSTM forget-gate bias 1.
  void InitGlorot(SplitMix64& rng);

  const std::vector<LayerSpec>& specs() const { return specs_; }
  std::vector<Param>& params() { return params_; }
  const std::vector<Param>& params() const { return params_; }
  std::size_t num_layers() const { return specs_.size(); }
  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t num_scalars() const;

  // Runs layers [first, last). `x` is time-major (steps * batch rows).
  // When `cache` is given it receives what Backward needs.
  Mat Forward(const Mat& x, std::size_t steps, std::size_t batch,
              ForwardCache* cache = nullptr, std::size_t first = 0,
              std::size_t last = kAll) const;

  // Accumulates parameter gradients into `grads` (shaped like params()) and
  // returns the gradient with respect to the input of layer `first`.
  Mat Backward(const ForwardCache& cache, const Mat& d_out,
               std::vector<Mat>& grads, std::size_t first = 0,
               std::size_t last = kAll) const;

  std::vector<Mat> ZeroGrads() const;

  // Named tensors laid out as ExpectedParameters describes.
  std::map<std::string, Tensor> ExportWeights() const;
  // Throws ShapeError/FormatError on missing names or wrong shapes.
  void ImportWeights(const std::map<std::string, Tensor>& weights);

 private:
  std::vector<LayerSpec> specs_;
  std::vector<Param> params_;
  std::vector<std::size_t> first_param_;  // index of each layer's first param
};

Mat ApplyActivation(Activation act, const Mat& z);

// ---------------------------------------------------------------- losses

inline constexpr double kBceClamp = 1e-12;

// Mean binary cross-entropy with predictions clamped to [eps, 1 - eps].
double BceLoss(std::span<const double> pred, std::span<const double> target);

struct LossAndGrad {
  double value = 0.0;
  Mat grad;  // d loss / d network output, same shape as the output
};

// BCE on the center step (steps / 2) of each sequence in a time-major
// single-column output; other steps receive zero gradient.
LossAndGrad CenterBce(const Mat& output, std::size_t steps, std::size_t batch,
                      std::span<const double> targets);

// Mean squared error over every entry.
LossAndGrad MeanSquaredError(const Mat& output, const Mat& target);

// ---------------------------------------------------------------- Adam

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

void Validate(const AdamConfig& cfg);

// Adam with bias correction:
//   m <- b1 m + (1 - b1) g;  v <- b2 v + (1 - b2) g^2
//   p <- p - lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
class AdamState {
 public:
  AdamState(const AdamConfig& cfg, const std::vector<Param>& params);

  void Step(std::vector<Param>& params, const std::vector<Mat>& grads);

  std::int64_t step() const { return step_; }
  const std::vector<Mat>& first_moment() const { return m_; }
  const std::vector<Mat>& second_moment() const { return v_; }

 private:
  AdamConfig cfg_;
  std::int64_t step_ = 0;
  std::vector<Mat> m_;
  std::vector<Mat> v_;
};

// ---------------------------------------------------------------- gradcheck

using LossFn = std::function<LossAndGrad(const Mat& output)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  double worst_analytic = 0.0;  // both gradients at worst_param
  double worst_numeric = 0.0;
  std::size_t num_checked = 0;
};

// Compares backprop gradients with central differences of step `h` for every
// scalar parameter, or for a seeded sample of max_per_param coordinates of
// each parameter tensor when max_per_param > 0. Relative error per scalar is
// |g_a - g_fd| / max(|g_a| + |g_fd|, 1e-8). The network is restored on exit.
GradCheckResult CheckGradients(Network& net, const Mat& x, std::size_t steps,
                               std::size_t batch, const LossFn& loss,
                               double h, std::size_t max_per_param = 0,
                               std::uint64_t sample_seed = 0);

// Gradient check of a freshly Glorot-initialized stack on random N(0, 1)
// input. Single-output stacks use CenterBce on random 0/1 targets, others MSE
// against random targets.
GradCheckResult GradCheckNetwork(const std::vector<LayerSpec>& specs,
                                 std::size_t steps, std::size_t batch,
                                 std::uint64_t seed, double h = 1e-5,
                                 std::size_t max_per_param = 0);

// ---------------------------------------------------------------- training

// Windows drawn from a set of sequences without materializing them.
struct WindowSet {
  struct Item {
    std::uint32_t sequence;
    std::uint32_t start;
    double target;
  };
  std::vector<const Mat*> sequences;
  std::vector<Item> items;
  std::size_t window_len = 0;

  std::size_t size() const { return items.size(); }
};

// Time-major batch of the selected windows.
Mat AssembleBatch(const WindowSet& set, std::span<const std::size_t> ids);

enum class Objective {
  kCenterBce,          // sigmoid output at the window center vs target
  kReconstructionMse,  // output vs the input window itself
};

struct TrainConfig {
  int epochs = 8;
  std::size_t batch_size = 8;
  AdamConfig adam;
  std::uint64_t seed = 0;
};

struct FitResult {
  int epochs_run = 0;
  int best_epoch = 0;  // 1-based; 0 when no epoch ran
  double best_val_loss = std::numeric_limits<double>::infinity();
  std::vector<double> train_loss;  // mean batch loss per epoch
  std::vector<double> val_loss;
};

// Mean loss over all windows of `set`.
double EvaluateLoss(const Network& net, const WindowSet& set, Objective obj,
                    std::size_t batch_size);

// Mini-batch Adam with a per-epoch seeded shuffle. After every epoch the
// validation loss is measured; on return `net` holds the parameters of the
// epoch with the lowest validation loss (ties keep the earlier epoch).
FitResult Fit(Network& net, const WindowSet& train, const WindowSet& val,
              Objective obj, const TrainConfig& cfg);

// Seeded split of n >= 2 items into (train, validation) index lists, both
// sorted. The validation side gets round(n * val_fraction) items, at least
// one and at most n - 1.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> SplitIndices(
    std::size_t n, double val_fraction, std::uint64_t seed);

}  // namespace vidsum

#endif  // VIDSUM_TENSORNET_H_
