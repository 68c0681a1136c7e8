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

// Independent reference implementations used as test oracles. They favour
// obviousness over speed and share no code with the library.
#ifndef VIDSUM_TESTS_ORACLES_H_
#define VIDSUM_TESTS_ORACLES_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Best total value over all 2^n subsets with total weight <= capacity.
inline double KnapsackBest(const std::vector<double>& values,
                           const std::vector<std::size_t>& weights,
                           std::size_t capacity) {
  const std::size_t n = values.size();
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::size_t w = 0;
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        w += weights[i];
        v += values[i];
      }
    }
    if (w <= capacity && v > best) best = v;
  }
  return best;
}

// Scatter of frames [a, b) computed straight from the Gram matrix.
inline double Scatter(const Eigen::MatrixXd& k, std::size_t a, std::size_t b) {
  double diag = 0.0, block = 0.0;
  for (std::size_t i = a; i < b; ++i) {
    diag += k(i, i);
    for (std::size_t j = a; j < b; ++j) block += k(i, j);
  }
  return diag - block / static_cast<double>(b - a);
}

// Minimal total scatter with exactly m segments, by enumerating every set of
// m - 1 change points (subsets of {1..T-1}).
inline double KtsBest(const Eigen::MatrixXd& k, std::size_t m) {
  const std::size_t t = static_cast<std::size_t>(k.rows());
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (t - 1)); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != m - 1) continue;
    double cost = 0.0;
    std::size_t start = 0;
    for (std::size_t cp = 1; cp < t; ++cp) {
      if (mask >> (cp - 1) & 1) {
        cost += Scatter(k, start, cp);
        start = cp;
      }
    }
    cost += Scatter(k, start, t);
    if (cost < best) best = cost;
  }
  return best;
}

struct Prf {
  double p, r, f;
};

// Temporal-overlap precision, recall and F in percent.
inline Prf Overlap(const std::vector<int>& pred, const std::vector<int>& gt) {
  double both = 0, np = 0, ng = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    both += pred[i] && gt[i];
    np += pred[i];
    ng += gt[i];
  }
  const double p = np > 0 ? 100.0 * both / np : 0.0;
  const double r = ng > 0 ? 100.0 * both / ng : 0.0;
  return {p, r, p + r > 0 ? 2 * p * r / (p + r) : 0.0};
}

}  // namespace oracle

#endif  // VIDSUM_TESTS_ORACLES_H_
