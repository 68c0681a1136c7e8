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

#include "vidsum/tensornet.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vidsum/errors.h"

namespace vidsum {
namespace {

Mat Sigmoid(const Mat& z) {
  return (1.0 + (-z.array()).exp()).inverse().matrix();
}

// d act / d z expressed through the activation output y.
Mat ActivationGrad(Activation act, const Mat& y, const Mat& dy) {
  switch (act) {
    case Activation::kLinear:
      return dy;
    case Activation::kSigmoid:
      return (dy.array() * y.array() * (1.0 - y.array())).matrix();
    case Activation::kReLU:
      return (y.array() > 0.0).select(dy, 0.0);
    case Activation::kTanh:
      return (dy.array() * (1.0 - y.array().square())).matrix();
  }
  return dy;
}

double GlorotLimit(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

void FillUniform(Mat& m, double limit, SplitMix64& rng) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      m(r, c) = rng.Uniform(-limit, limit);
    }
  }
}

}  // namespace

Mat ApplyActivation(Activation act, const Mat& z) {
  switch (act) {
    case Activation::kLinear: return z;
    case Activation::kSigmoid: return Sigmoid(z);
    case Activation::kReLU: return z.cwiseMax(0.0);
    case Activation::kTanh: return z.array().tanh().matrix();
  }
  return z;
}

// ---------------------------------------------------------------- Network

Network::Network(std::vector<LayerSpec> specs) : specs_(std::move(specs)) {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const LayerSpec& s = specs_[i];
    ValidateLayerSpec(s);
    if (i > 0 && specs_[i - 1].OutputDim() != s.in_dim) {
      throw ShapeError("layer '" + s.name + "' input dim does not match the " +
                       "previous layer's output");
    }
    first_param_.push_back(params_.size());
    for (const auto& [name, shape] : ExpectedParameters(s)) {
      // Biases are kept as 1 x n rows; everything else folds leading dims.
      Mat value;
      if (shape.size() == 1) {
        value = Mat::Zero(1, shape[0]);
      } else {
        std::size_t rows = 1;
        for (std::size_t k = 0; k + 1 < shape.size(); ++k) rows *= shape[k];
        value = Mat::Zero(rows, shape.back());
      }
      params_.push_back({name, std::move(value)});
    }
  }
}

void Network::InitGlorot(SplitMix64& rng) {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const LayerSpec& s = specs_[i];
    const std::size_t p = first_param_[i];
    switch (s.kind) {
      case LayerKind::kDense:
        FillUniform(params_[p].value, GlorotLimit(s.in_dim, s.out_dim), rng);
        params_[p + 1].value.setZero();
        break;
      case LayerKind::kConv1D:
        FillUniform(params_[p].value,
                    GlorotLimit(s.kernel_width * s.in_dim,
                                s.kernel_width * s.out_dim),
                    rng);
        params_[p + 1].value.setZero();
        break;
      case LayerKind::kLstm: {
        const std::size_t h = s.out_dim;
        const std::size_t dirs = s.bidirectional ? 2 : 1;
        for (std::size_t d = 0; d < dirs; ++d) {
          const std::size_t q = p + 3 * d;
          FillUniform(params_[q].value, GlorotLimit(s.in_dim, 4 * h), rng);
          FillUniform(params_[q + 1].value, GlorotLimit(h, 4 * h), rng);
          params_[q + 2].value.setZero();
          params_[q + 2].value.middleCols(h, h).setOnes();
        }
        break;
      }
    }
  }
}

std::size_t Network::input_dim() const {
  return specs_.empty() ? 0 : specs_.front().in_dim;
}

std::size_t Network::output_dim() const {
  return specs_.empty() ? 0 : specs_.back().OutputDim();
}

std::size_t Network::num_scalars() const {
  std::size_t n = 0;
  for (const Param& p : params_) n += p.value.size();
  return n;
}

std::vector<Mat> Network::ZeroGrads() const {
  std::vector<Mat> g;
  g.reserve(params_.size());
  for (const Param& p : params_) {
    g.push_back(Mat::Zero(p.value.rows(), p.value.cols()));
  }
  return g;
}

Mat Network::Forward(const Mat& x, std::size_t steps, std::size_t batch,
                     ForwardCache* cache, std::size_t first,
                     std::size_t last) const {
  last = std::min(last, specs_.size());
  if (static_cast<std::size_t>(x.rows()) != steps * batch) {
    throw ShapeError("input rows do not equal steps * batch");
  }
  if (cache != nullptr) {
    cache->layers.assign(specs_.size(), LayerCache{});
    cache->steps = steps;
    cache->batch = batch;
  }
  const auto B = static_cast<Eigen::Index>(batch);
  const auto L = static_cast<Eigen::Index>(steps);
  const Eigen::Index rows = L * B;
  Mat cur = x;
  for (std::size_t li = first; li < last; ++li) {
    const LayerSpec& s = specs_[li];
    if (static_cast<std::size_t>(cur.cols()) != s.in_dim) {
      throw ShapeError("input dim " + std::to_string(cur.cols()) +
                       " does not match layer '" + s.name + "' (" +
                       std::to_string(s.in_dim) + ")");
    }
    const std::size_t p = first_param_[li];
    LayerCache lc;
    Mat out;
    switch (s.kind) {
      case LayerKind::kDense: {
        Mat z = cur * params_[p].value;
        z.rowwise() += params_[p + 1].value.row(0);
        out = ApplyActivation(s.activation, z);
        break;
      }
      case LayerKind::kConv1D: {
        const Mat& w = params_[p].value;
        const auto in = static_cast<Eigen::Index>(s.in_dim);
        const auto half = static_cast<Eigen::Index>(s.kernel_width / 2);
        Mat z = Mat::Zero(rows, s.out_dim);
        for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(s.kernel_width); ++k) {
          const Eigen::Index o = k - half;
          const Eigen::Index t0 = std::max<Eigen::Index>(0, -o);
          const Eigen::Index t1 = std::min<Eigen::Index>(L, L - o);
          if (t1 <= t0) continue;
          z.middleRows(t0 * B, (t1 - t0) * B).noalias() +=
              cur.middleRows((t0 + o) * B, (t1 - t0) * B) *
              w.middleRows(k * in, in);
        }
        z.rowwise() += params_[p + 1].value.row(0);
        out = ApplyActivation(s.activation, z);
        break;
      }
      case LayerKind::kLstm: {
        const auto H = static_cast<Eigen::Index>(s.out_dim);
        const std::size_t dirs = s.bidirectional ? 2 : 1;
        out.resize(rows, H * static_cast<Eigen::Index>(dirs));
        for (std::size_t d = 0; d < dirs; ++d) {
          const Mat& wx = params_[p + 3 * d].value;
          const Mat& wh = params_[p + 3 * d + 1].value;
          Mat gates = cur * wx;
          gates.rowwise() += params_[p + 3 * d + 2].value.row(0);
          Mat cells(rows, H);
          Mat hs(rows, H);
          Mat h_prev = Mat::Zero(B, H);
          Mat c_prev = Mat::Zero(B, H);
          for (Eigen::Index step = 0; step < L; ++step) {
            const Eigen::Index t = d == 0 ? step : L - 1 - step;
            auto g = gates.middleRows(t * B, B);
            g.noalias() += h_prev * wh;
            g.leftCols(H) = Sigmoid(g.leftCols(H));
            g.middleCols(H, H) = Sigmoid(g.middleCols(H, H));
            g.middleCols(2 * H, H) = g.middleCols(2 * H, H).array().tanh().matrix();
            g.rightCols(H) = Sigmoid(g.rightCols(H));
            c_prev = (g.middleCols(H, H).array() * c_prev.array() +
                      g.leftCols(H).array() * g.middleCols(2 * H, H).array())
                         .matrix();
            h_prev = (g.rightCols(H).array() * c_prev.array().tanh()).matrix();
            cells.middleRows(t * B, B) = c_prev;
            hs.middleRows(t * B, B) = h_prev;
          }
          out.middleCols(H * static_cast<Eigen::Index>(d), H) = hs;
          if (cache != nullptr) {
            lc.aux.push_back(std::move(gates));
            lc.aux.push_back(std::move(cells));
          }
        }
        break;
      }
    }
    if (cache != nullptr) {
      lc.input = cur;
      lc.output = out;
      cache->layers[li] = std::move(lc);
    }
    cur = std::move(out);
  }
  return cur;
}

Mat Network::Backward(const ForwardCache& cache, const Mat& d_out,
                      std::vector<Mat>& grads, std::size_t first,
                      std::size_t last) const {
  last = std::min(last, specs_.size());
  if (grads.size() != params_.size()) {
    throw ShapeError("gradient list does not match parameters");
  }
  const auto B = static_cast<Eigen::Index>(cache.batch);
  const auto L = static_cast<Eigen::Index>(cache.steps);
  const Eigen::Index rows = L * B;
  Mat d = d_out;
  for (std::size_t li = last; li-- > first;) {
    const LayerSpec& s = specs_[li];
    const LayerCache& lc = cache.layers.at(li);
    if (d.rows() != lc.output.rows() || d.cols() != lc.output.cols()) {
      throw ShapeError("upstream gradient shape mismatch at '" + s.name + "'");
    }
    const std::size_t p = first_param_[li];
    const Mat& x = lc.input;
    Mat dx;
    switch (s.kind) {
      case LayerKind::kDense: {
        const Mat dz = ActivationGrad(s.activation, lc.output, d);
        grads[p].noalias() += x.transpose() * dz;
        grads[p + 1] += dz.colwise().sum();
        dx.noalias() = dz * params_[p].value.transpose();
        break;
      }
      case LayerKind::kConv1D: {
        const Mat dz = ActivationGrad(s.activation, lc.output, d);
        const Mat& w = params_[p].value;
        const auto in = static_cast<Eigen::Index>(s.in_dim);
        const auto half = static_cast<Eigen::Index>(s.kernel_width / 2);
        dx = Mat::Zero(rows, in);
        for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(s.kernel_width); ++k) {
          const Eigen::Index o = k - half;
          const Eigen::Index t0 = std::max<Eigen::Index>(0, -o);
          const Eigen::Index t1 = std::min<Eigen::Index>(L, L - o);
          if (t1 <= t0) continue;
          const Eigen::Index n = (t1 - t0) * B;
          grads[p].middleRows(k * in, in).noalias() +=
              x.middleRows((t0 + o) * B, n).transpose() * dz.middleRows(t0 * B, n);
          dx.middleRows((t0 + o) * B, n).noalias() +=
              dz.middleRows(t0 * B, n) * w.middleRows(k * in, in).transpose();
        }
        grads[p + 1] += dz.colwise().sum();
        break;
      }
      case LayerKind::kLstm: {
        const auto H = static_cast<Eigen::Index>(s.out_dim);
        const std::size_t dirs = s.bidirectional ? 2 : 1;
        dx = Mat::Zero(rows, x.cols());
        for (std::size_t d_i = 0; d_i < dirs; ++d_i) {
          const Mat& wx = params_[p + 3 * d_i].value;
          const Mat& wh = params_[p + 3 * d_i + 1].value;
          const Mat& gates = lc.aux[2 * d_i];
          const Mat& cells = lc.aux[2 * d_i + 1];
          const auto hs = lc.output.middleCols(H * static_cast<Eigen::Index>(d_i), H);
          const auto dh_out = d.middleCols(H * static_cast<Eigen::Index>(d_i), H);
          Mat d_gates(rows, 4 * H);
          Mat dh_next = Mat::Zero(B, H);
          Mat dc_next = Mat::Zero(B, H);
          Mat& d_wh = grads[p + 3 * d_i + 1];
          for (Eigen::Index step = L; step-- > 0;) {
            const Eigen::Index t = d_i == 0 ? step : L - 1 - step;
            const Eigen::Index t_prev = d_i == 0 ? t - 1 : t + 1;
            const auto g = gates.middleRows(t * B, B);
            const auto ig = g.leftCols(H).array();
            const auto fg = g.middleCols(H, H).array();
            const auto cand = g.middleCols(2 * H, H).array();
            const auto og = g.rightCols(H).array();
            const Eigen::ArrayXXd tc = cells.middleRows(t * B, B).array().tanh();
            const Eigen::ArrayXXd dh = (dh_out.middleRows(t * B, B) + dh_next).array();
            const Eigen::ArrayXXd dc = dh * og * (1.0 - tc.square()) + dc_next.array();
            Eigen::ArrayXXd c_prev = Eigen::ArrayXXd::Zero(B, H);
            if (step > 0) c_prev = cells.middleRows(t_prev * B, B).array();
            auto dg = d_gates.middleRows(t * B, B);
            dg.leftCols(H) = (dc * cand * ig * (1.0 - ig)).matrix();
            dg.middleCols(H, H) = (dc * c_prev * fg * (1.0 - fg)).matrix();
            dg.middleCols(2 * H, H) = (dc * ig * (1.0 - cand.square())).matrix();
            dg.rightCols(H) = (dh * tc * og * (1.0 - og)).matrix();
            dc_next = (dc * fg).matrix();
            if (step > 0) {
              d_wh.noalias() += hs.middleRows(t_prev * B, B).transpose() * dg;
              dh_next.noalias() = dg * wh.transpose();
            }
          }
          grads[p + 3 * d_i].noalias() += x.transpose() * d_gates;
          grads[p + 3 * d_i + 2] += d_gates.colwise().sum();
          dx.noalias() += d_gates * wx.transpose();
        }
        break;
      }
    }
    d = std::move(dx);
  }
  return d;
}

std::map<std::string, Tensor> Network::ExportWeights() const {
  std::map<std::string, Tensor> out;
  std::size_t k = 0;
  for (const LayerSpec& s : specs_) {
    for (const auto& [name, shape] : ExpectedParameters(s)) {
      Tensor t = ToTensor(params_[k++].value);
      t.shape = shape;
      out.emplace(name, std::move(t));
    }
  }
  return out;
}

void Network::ImportWeights(const std::map<std::string, Tensor>& weights) {
  std::size_t k = 0;
  for (const LayerSpec& s : specs_) {
    for (const auto& [name, shape] : ExpectedParameters(s)) {
      auto it = weights.find(name);
      if (it == weights.end()) throw FormatError("missing weight '" + name + "'");
      if (it->second.shape != shape) {
        throw ShapeError("weight '" + name + "' has the wrong shape");
      }
      Mat& dst = params_[k++].value;
      Tensor flat = it->second;
      flat.shape = {static_cast<std::size_t>(dst.rows()),
                    static_cast<std::size_t>(dst.cols())};
      dst = FromTensor(flat);
    }
  }
}

// ---------------------------------------------------------------- losses

double BceLoss(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) {
    throw ShapeError("prediction and target lengths differ");
  }
  if (pred.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = std::clamp(pred[i], kBceClamp, 1.0 - kBceClamp);
    const double t = target[i];
    sum -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
  }
  return sum / static_cast<double>(pred.size());
}

LossAndGrad CenterBce(const Mat& output, std::size_t steps, std::size_t batch,
                      std::span<const double> targets) {
  if (output.cols() != 1 ||
      static_cast<std::size_t>(output.rows()) != steps * batch ||
      targets.size() != batch) {
    throw ShapeError("center BCE shape mismatch");
  }
  LossAndGrad r;
  r.grad = Mat::Zero(output.rows(), 1);
  const std::size_t c = steps / 2;
  const double n = static_cast<double>(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    const std::size_t row = c * batch + b;
    const double raw = output(row, 0);
    const double p = std::clamp(raw, kBceClamp, 1.0 - kBceClamp);
    const double t = targets[b];
    r.value -= (t * std::log(p) + (1.0 - t) * std::log(1.0 - p)) / n;
    // The clamp is flat outside [eps, 1 - eps].
    if (raw > kBceClamp && raw < 1.0 - kBceClamp) {
      r.grad(row, 0) = (-t / p + (1.0 - t) / (1.0 - p)) / n;
    }
  }
  return r;
}

LossAndGrad MeanSquaredError(const Mat& output, const Mat& target) {
  if (output.rows() != target.rows() || output.cols() != target.cols()) {
    throw ShapeError("MSE shape mismatch");
  }
  LossAndGrad r;
  const double n = static_cast<double>(output.size());
  const Mat diff = output - target;
  r.value = diff.squaredNorm() / n;
  r.grad = (2.0 / n) * diff;
  return r;
}

// ---------------------------------------------------------------- Adam

void Validate(const AdamConfig& cfg) {
  if (!(cfg.lr > 0.0) || !(cfg.beta1 > 0.0 && cfg.beta1 < 1.0) ||
      !(cfg.beta2 > 0.0 && cfg.beta2 < 1.0) || !(cfg.epsilon > 0.0)) {
    throw ValueError("Adam needs lr > 0, 0 < beta1, beta2 < 1, epsilon > 0");
  }
}

AdamState::AdamState(const AdamConfig& cfg, const std::vector<Param>& params)
    : cfg_(cfg) {
  Validate(cfg);
  for (const Param& p : params) {
    m_.push_back(Mat::Zero(p.value.rows(), p.value.cols()));
    v_.push_back(Mat::Zero(p.value.rows(), p.value.cols()));
  }
}

void AdamState::Step(std::vector<Param>& params, const std::vector<Mat>& grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw ShapeError("Adam state does not match parameters");
  }
  ++step_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (grads[i].rows() != m_[i].rows() || grads[i].cols() != m_[i].cols()) {
      throw ShapeError("gradient shape mismatch for '" + params[i].name + "'");
    }
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grads[i];
    v_[i] = cfg_.beta2 * v_[i] +
            (1.0 - cfg_.beta2) * grads[i].array().square().matrix();
    params[i].value.array() -=
        cfg_.lr * (m_[i].array() / bc1) /
        ((v_[i].array() / bc2).sqrt() + cfg_.epsilon);
  }
}

// ---------------------------------------------------------------- gradcheck

GradCheckResult CheckGradients(Network& net, const Mat& x, std::size_t steps,
                               std::size_t batch, const LossFn& loss,
                               double h, std::size_t max_per_param,
                               std::uint64_t sample_seed) {
  ForwardCache cache;
  const Mat out = net.Forward(x, steps, batch, &cache);
  const LossAndGrad lg = loss(out);
  std::vector<Mat> grads = net.ZeroGrads();
  net.Backward(cache, lg.grad, grads);

  GradCheckResult result;
  auto& params = net.params();
  SplitMix64 pick(sample_seed);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Mat& w = params[i].value;
    std::vector<Eigen::Index> coords(static_cast<std::size_t>(w.size()));
    std::iota(coords.begin(), coords.end(), Eigen::Index{0});
    if (max_per_param > 0 && coords.size() > max_per_param) {
      // Partial Fisher-Yates: the first max_per_param entries are a uniform
      // sample without replacement.
      for (std::size_t k = 0; k < max_per_param; ++k) {
        std::swap(coords[k], coords[k + pick.UniformInt(coords.size() - k)]);
      }
      coords.resize(max_per_param);
    }
    for (const Eigen::Index j : coords) {
      const double saved = w.data()[j];
      w.data()[j] = saved + h;
      const double up = loss(net.Forward(x, steps, batch)).value;
      w.data()[j] = saved - h;
      const double down = loss(net.Forward(x, steps, batch)).value;
      w.data()[j] = saved;
      const double fd = (up - down) / (2.0 * h);
      const double an = grads[i].data()[j];
      const double rel =
          std::abs(an - fd) / std::max(std::abs(an) + std::abs(fd), 1e-8);
      if (rel > result.max_rel_error || result.worst_param.empty()) {
        result.max_rel_error = std::max(rel, result.max_rel_error);
        result.worst_param = params[i].name + "[" + std::to_string(j) + "]";
        result.worst_analytic = an;
        result.worst_numeric = fd;
      }
      ++result.num_checked;
    }
  }
  return result;
}

GradCheckResult GradCheckNetwork(const std::vector<LayerSpec>& specs,
                                 std::size_t steps, std::size_t batch,
                                 std::uint64_t seed, double h,
                                 std::size_t max_per_param) {
  Network net(specs);
  SplitMix64 rng(seed);
  net.InitGlorot(rng);
  const auto rows = static_cast<Eigen::Index>(steps * batch);
  Mat x(rows, static_cast<Eigen::Index>(net.input_dim()));
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.Normal();
  LossFn loss;
  if (net.output_dim() == 1) {
    std::vector<double> targets(batch);
    for (double& t : targets) t = rng.Uniform() < 0.5 ? 0.0 : 1.0;
    loss = [=](const Mat& out) { return CenterBce(out, steps, batch, targets); };
  } else {
    Mat target(rows, static_cast<Eigen::Index>(net.output_dim()));
    for (Eigen::Index i = 0; i < target.size(); ++i) target.data()[i] = rng.Normal();
    loss = [=](const Mat& out) { return MeanSquaredError(out, target); };
  }
  return CheckGradients(net, x, steps, batch, loss, h, max_per_param,
                        DeriveSeed(seed, "gradcheck-sample"));
}

// ---------------------------------------------------------------- training

Mat AssembleBatch(const WindowSet& set, std::span<const std::size_t> ids) {
  if (set.sequences.empty() || set.window_len == 0) {
    throw ValueError("empty window set");
  }
  const auto B = static_cast<Eigen::Index>(ids.size());
  const Eigen::Index dim = set.sequences.front()->cols();
  Mat x(static_cast<Eigen::Index>(set.window_len) * B, dim);
  for (Eigen::Index b = 0; b < B; ++b) {
    const WindowSet::Item& it = set.items.at(ids[b]);
    const Mat& seq = *set.sequences.at(it.sequence);
    if (seq.cols() != dim) throw ShapeError("window sources differ in dim");
    if (it.start + set.window_len > static_cast<std::size_t>(seq.rows())) {
      throw ShapeError("window runs past the end of its sequence");
    }
    for (Eigen::Index t = 0; t < static_cast<Eigen::Index>(set.window_len); ++t) {
      x.row(t * B + b) = seq.row(it.start + t);
    }
  }
  return x;
}

namespace {

std::vector<double> BatchTargets(const WindowSet& set,
                                 std::span<const std::size_t> ids) {
  std::vector<double> t;
  t.reserve(ids.size());
  for (std::size_t id : ids) t.push_back(set.items[id].target);
  return t;
}

LossAndGrad ObjectiveLoss(Objective obj, const Mat& out, const Mat& x,
                          const WindowSet& set,
                          std::span<const std::size_t> ids) {
  if (obj == Objective::kReconstructionMse) return MeanSquaredError(out, x);
  const std::vector<double> t = BatchTargets(set, ids);
  return CenterBce(out, set.window_len, ids.size(), t);
}

}  // namespace

double EvaluateLoss(const Network& net, const WindowSet& set, Objective obj,
                    std::size_t batch_size) {
  if (set.size() == 0) throw ValueError("cannot evaluate on an empty set");
  batch_size = std::max<std::size_t>(batch_size, 1);
  std::vector<std::size_t> ids(set.size());
  std::iota(ids.begin(), ids.end(), 0);
  double total = 0.0;
  for (std::size_t at = 0; at < ids.size(); at += batch_size) {
    const std::size_t n = std::min(batch_size, ids.size() - at);
    const std::span<const std::size_t> chunk(ids.data() + at, n);
    const Mat x = AssembleBatch(set, chunk);
    const Mat out = net.Forward(x, set.window_len, n);
    total += ObjectiveLoss(obj, out, x, set, chunk).value * static_cast<double>(n);
  }
  return total / static_cast<double>(set.size());
}

FitResult Fit(Network& net, const WindowSet& train, const WindowSet& val,
              Objective obj, const TrainConfig& cfg) {
  if (train.size() == 0) throw ValueError("empty training split");
  if (val.size() == 0) throw ValueError("empty validation split");
  if (cfg.epochs < 0) throw ValueError("epochs must be non-negative");
  if (cfg.batch_size == 0) throw ValueError("batch size must be positive");
  FitResult result;
  if (cfg.epochs == 0) return result;

  AdamState adam(cfg.adam, net.params());
  std::vector<Param> best = net.params();
  std::vector<std::size_t> order(train.size());
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    SplitMix64 rng(DeriveSeed(cfg.seed, "epoch-shuffle",
                              static_cast<std::uint64_t>(epoch)));
    Shuffle(order, rng);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    ForwardCache cache;
    for (std::size_t at = 0; at < order.size(); at += cfg.batch_size) {
      const std::size_t n = std::min(cfg.batch_size, order.size() - at);
      const std::span<const std::size_t> chunk(order.data() + at, n);
      const Mat x = AssembleBatch(train, chunk);
      const Mat out = net.Forward(x, train.window_len, n, &cache);
      const LossAndGrad lg = ObjectiveLoss(obj, out, x, train, chunk);
      std::vector<Mat> grads = net.ZeroGrads();
      net.Backward(cache, lg.grad, grads);
      adam.Step(net.params(), grads);
      epoch_loss += lg.value;
      ++batches;
    }
    result.train_loss.push_back(epoch_loss / static_cast<double>(batches));
    const double v = EvaluateLoss(net, val, obj, cfg.batch_size);
    result.val_loss.push_back(v);
    result.epochs_run = epoch;
    if (v < result.best_val_loss) {
      result.best_val_loss = v;
      result.best_epoch = epoch;
      best = net.params();
    }
  }
  if (result.best_epoch > 0) net.params() = std::move(best);
  return result;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> SplitIndices(
    std::size_t n, double val_fraction, std::uint64_t seed) {
  if (n < 2) throw ValueError("need at least two items to split");
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw ValueError("validation fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(DeriveSeed(seed, "train-val-split"));
  Shuffle(order, rng);
  const auto n_val = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(n))),
      1, n - 1);
  std::vector<std::size_t> val(order.begin(), order.begin() + n_val);
  std::vector<std::size_t> train(order.begin() + n_val, order.end());
  std::sort(val.begin(), val.end());
  std::sort(train.begin(), train.end());
  return {std::move(train), std::move(val)};
}

}  // namespace vidsum
