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

#include "vidsum/kts.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "vidsum/errors.h"

namespace vidsum {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Mat GramMatrix(const Mat& frames, const KernelSpec& kernel) {
  if (frames.rows() < 1) throw ValueError("Gram matrix needs at least one frame");
  if (kernel.kind == KernelKind::kRbf && !(kernel.gamma > 0.0)) {
    throw ValueError("RBF gamma must be positive");
  }
  Mat x = frames;
  if (kernel.normalize) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double n = x.row(i).norm();
      if (n > 0.0) x.row(i) /= n;
    }
  }
  Mat k = x * x.transpose();
  if (kernel.kind == KernelKind::kRbf) {
    const Vec sq = k.diagonal();
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
      for (Eigen::Index j = 0; j < k.cols(); ++j) {
        const double d2 = std::max(0.0, sq(i) + sq(j) - 2.0 * k(i, j));
        k(i, j) = i == j ? 1.0 : std::exp(-kernel.gamma * d2);
      }
    }
  }
  // Exact symmetry regardless of GEMM rounding.
  k = 0.5 * (k + k.transpose()).eval();
  return k;
}

ScatterTable::ScatterTable(const Mat& gram) : n_(gram.rows()) {
  if (gram.rows() != gram.cols()) throw ShapeError("Gram matrix must be square");
  const auto n = static_cast<Eigen::Index>(n_);
  prefix_ = Mat::Zero(n + 1, n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      prefix_(i + 1, j + 1) =
          gram(i, j) + prefix_(i, j + 1) + prefix_(i + 1, j) - prefix_(i, j);
    }
  }
  diag_.assign(n_ + 1, 0.0);
  for (std::size_t i = 0; i < n_; ++i) diag_[i + 1] = diag_[i] + gram(i, i);
}

double ScatterTable::Scatter(std::size_t a, std::size_t b) const {
  const double block = prefix_(b, b) - prefix_(a, b) - prefix_(b, a) + prefix_(a, a);
  return (diag_[b] - diag_[a]) - block / static_cast<double>(b - a);
}

KtsTable SolveKts(const ScatterTable& scatter,
                  std::optional<std::size_t> max_seg_frames,
                  std::size_t max_segments) {
  const std::size_t n = scatter.size();
  if (n == 0) throw ValueError("cannot segment an empty sequence");
  if (max_seg_frames && *max_seg_frames == 0) {
    throw ValueError("max segment length must be positive");
  }
  const std::size_t cap = max_seg_frames.value_or(n);
  const std::size_t m_max = std::min(std::max<std::size_t>(max_segments, 1), n);

  // cost[m][t]: best m-segment split of [0, t); arg[m][t]: last boundary.
  std::vector<std::vector<double>> cost(m_max + 1, std::vector<double>(n + 1, kInf));
  std::vector<std::vector<std::size_t>> arg(m_max + 1,
                                            std::vector<std::size_t>(n + 1, 0));
  for (std::size_t t = 1; t <= std::min(cap, n); ++t) cost[1][t] = scatter.Scatter(0, t);
  for (std::size_t m = 2; m <= m_max; ++m) {
    for (std::size_t t = m; t <= n; ++t) {
      const std::size_t lo = std::max(m - 1, t > cap ? t - cap : 0);
      double best = kInf;
      std::size_t best_arg = 0;
      for (std::size_t tp = lo; tp < t; ++tp) {
        if (cost[m - 1][tp] == kInf) continue;
        const double c = cost[m - 1][tp] + scatter.Scatter(tp, t);
        if (c < best) {
          best = c;
          best_arg = tp;
        }
      }
      cost[m][t] = best;
      arg[m][t] = best_arg;
    }
  }

  KtsTable table;
  table.costs.assign(m_max + 1, kInf);
  table.boundaries.assign(m_max + 1, {});
  for (std::size_t m = 1; m <= m_max; ++m) {
    table.costs[m] = cost[m][n];
    if (cost[m][n] == kInf) continue;
    std::vector<std::size_t> cps(m - 1);
    std::size_t t = n;
    for (std::size_t k = m; k > 1; --k) {
      t = arg[k][t];
      cps[k - 2] = t;
    }
    table.boundaries[m] = std::move(cps);
  }
  return table;
}

std::size_t SelectSegmentCount(const std::vector<double>& costs,
                               std::size_t num_frames, double penalty,
                               std::size_t min_segments) {
  if (!(penalty >= 0.0)) throw ValueError("KTS penalty must be non-negative");
  const double t = static_cast<double>(num_frames);
  std::size_t best_m = 0;
  double best = kInf;
  for (std::size_t m = std::max<std::size_t>(min_segments, 1); m < costs.size(); ++m) {
    if (costs[m] == kInf) continue;
    const double md = static_cast<double>(m);
    const double obj = costs[m] + penalty * md * (std::log(t / md) + 1.0);
    if (obj < best) {
      best = obj;
      best_m = m;
    }
  }
  if (best_m == 0) {
    throw ValueError("no feasible segmentation within max_segments");
  }
  return best_m;
}

std::size_t MaxSegmentFrames(double seconds, double fps) {
  if (!(seconds > 0.0) || !(fps > 0.0)) {
    throw ValueError("shot duration and fps must be positive");
  }
  return static_cast<std::size_t>(std::ceil(seconds * fps - 1e-9));
}

Segmentation Segment(const Mat& frames, double fps, const KtsConfig& cfg,
                     const std::string& video_id) {
  const auto n = static_cast<std::size_t>(frames.rows());
  if (n == 0) throw ValueError("cannot segment an empty sequence");
  if (cfg.max_seg_frames && *cfg.max_seg_frames == 0) {
    throw ValueError("max segment length must be positive");
  }
  const std::size_t m_max = std::min(cfg.max_segments.value_or(n), n);
  const std::size_t m_min =
      cfg.max_seg_frames ? (n + *cfg.max_seg_frames - 1) / *cfg.max_seg_frames : 1;
  if (m_min > m_max) {
    throw ValueError("max_segments is too small for the segment length cap");
  }
  const ScatterTable scatter(GramMatrix(frames, cfg.kernel));
  const KtsTable table = SolveKts(scatter, cfg.max_seg_frames, m_max);
  const std::size_t m = SelectSegmentCount(table.costs, n, cfg.penalty, m_min);

  Segmentation seg;
  seg.video_id = video_id;
  seg.n_frames = n;
  seg.fps = fps;
  seg.change_points = table.boundaries[m];
  seg.max_seg_frames = cfg.max_seg_frames;
  return seg;
}

std::vector<std::pair<std::size_t, std::size_t>> Segmentation::Segments() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t start = 0;
  for (std::size_t cp : change_points) {
    out.emplace_back(start, cp);
    start = cp;
  }
  out.emplace_back(start, n_frames);
  return out;
}

void Validate(const Segmentation& seg) {
  if (seg.n_frames == 0) throw ValueError("segmentation covers no frames");
  std::size_t prev = 0;
  for (std::size_t cp : seg.change_points) {
    if (cp <= prev || cp >= seg.n_frames) {
      throw ValueError("change points must increase strictly inside (0, T)");
    }
    prev = cp;
  }
  if (seg.max_seg_frames) {
    for (const auto& [a, b] : seg.Segments()) {
      if (b - a > *seg.max_seg_frames) {
        throw ValueError("segment longer than the cap");
      }
    }
  }
}

std::string FormatSegmentation(const Segmentation& seg) {
  std::ostringstream out;
  out.precision(17);
  out << "# video_id " << seg.video_id << "\n";
  out << "# n_frames " << seg.n_frames << "\n";
  out << "# fps " << seg.fps << "\n";
  if (seg.max_seg_frames) out << "# max_seg_frames " << *seg.max_seg_frames << "\n";
  for (std::size_t cp : seg.change_points) out << cp << "\n";
  return out.str();
}

Segmentation ParseSegmentation(std::string_view text) {
  Segmentation seg;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_n = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "video_id") {
        ls >> seg.video_id;
      } else if (key == "n_frames") {
        have_n = static_cast<bool>(ls >> seg.n_frames);
      } else if (key == "fps") {
        ls >> seg.fps;
      } else if (key == "max_seg_frames") {
        std::size_t cap;
        if (ls >> cap) seg.max_seg_frames = cap;
      }
      continue;
    }
    std::size_t cp;
    std::string rest;
    if (!(ls >> cp) || (ls >> rest)) {
      throw FormatError("bad change point line '" + line + "'");
    }
    seg.change_points.push_back(cp);
  }
  if (!have_n) throw FormatError("segmentation lacks '# n_frames'");
  Validate(seg);
  return seg;
}

std::string FormatSegmentationJson(const Segmentation& seg) {
  nlohmann::json j;
  j["video_id"] = seg.video_id;
  j["n_frames"] = seg.n_frames;
  j["fps"] = seg.fps;
  j["change_points"] = seg.change_points;
  if (seg.max_seg_frames) {
    j["max_seg_frames"] = *seg.max_seg_frames;
  } else {
    j["max_seg_frames"] = nullptr;
  }
  return j.dump();
}

Segmentation ParseSegmentationJson(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text.begin(), text.end());
    Segmentation seg;
    seg.video_id = j.at("video_id").get<std::string>();
    seg.n_frames = j.at("n_frames").get<std::size_t>();
    seg.fps = j.at("fps").get<double>();
    seg.change_points = j.at("change_points").get<std::vector<std::size_t>>();
    if (j.contains("max_seg_frames") && !j["max_seg_frames"].is_null()) {
      seg.max_seg_frames = j["max_seg_frames"].get<std::size_t>();
    }
    Validate(seg);
    return seg;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("segmentation json: ") + e.what());
  }
}

}  // namespace vidsum
