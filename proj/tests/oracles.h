// Copyright 2026 The score-re Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCORE_TESTS_ORACLES_H_
#define SCORE_TESTS_ORACLES_H_

// Brute-force reference computations used only by tests. They work on plain
// nested vectors and std::set label sets and share no code with the library
// paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Rows = std::vector<Vec>;
using LabelSets = std::vector<std::set<int>>;
using Bits = std::vector<std::vector<int>>;

inline double dist(const Vec &a, const Vec &b, bool cosine) {
  if (cosine) {
    double dot = 0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return 1.0 - dot;
  }
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline Vec pair_vector(const Rows &tokens, const std::vector<int> &head,
                       const std::vector<int> &tail) {
  Vec out;
  for (const auto *set : {&head, &tail}) {
    for (std::size_t c = 0; c < tokens[0].size(); ++c) {
      double s = 0;
      for (int t : *set) s += tokens[static_cast<std::size_t>(t)][c];
      out.push_back(s / static_cast<double>(set->size()));
    }
  }
  return out;
}

inline int shared(const std::set<int> &a, const std::set<int> &b) {
  int n = 0;
  for (int x : a) n += static_cast<int>(b.count(x));
  return n;
}

// Literal multi-label supervised contrastive loss with w = exp(-D / tau).
inline double supcon_loss(const Rows &z, const LabelSets &y, bool cosine, double tau) {
  const std::size_t n = z.size();
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double denom_beta = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (k != i) denom_beta += shared(y[i], y[k]);
    if (denom_beta == 0) continue;
    double denom_w = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (k != i) denom_w += std::exp(-dist(z[i], z[k], cosine) / tau);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double beta = shared(y[i], y[j]) / denom_beta;
      total += beta * std::log(std::exp(-dist(z[i], z[j], cosine) / tau) / denom_w);
    }
  }
  return -total / static_cast<double>(n);
}

// Full sort of all distances, ties by index, truncated at k.
inline std::vector<std::pair<double, std::size_t>> knn(const Rows &store, const Vec &q,
                                                       std::size_t k, bool cosine) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < store.size(); ++i) all.push_back({dist(q, store[i], cosine), i});
  std::sort(all.begin(), all.end());
  all.resize(k);
  return all;
}

// Posterior with unshifted kernel weights, evaluated term by term.
inline Vec posterior(const Rows &store, const Bits &labels, const Vec &q, std::size_t k,
                     double tau, bool cosine, bool informative) {
  const std::size_t r = labels[0].size();
  std::vector<double> counts(r, 0);
  double total = 0;
  for (const auto &row : labels)
    for (std::size_t h = 0; h < r; ++h) {
      counts[h] += row[h];
      total += row[h];
    }
  const auto nn = knn(store, q, k, cosine);
  Vec out(r);
  for (std::size_t h = 0; h < r; ++h) {
    const double prior = informative ? counts[h] / total : 0.5;
    double num = 0, den = 0;
    for (const auto &[d, idx] : nn) {
      const double w = std::exp(-d / tau);
      const double y = labels[idx][h];
      num += prior * y * w;
      den += (prior * y + (1 - prior) * (1 - y)) * w;
    }
    out[h] = num / den;
  }
  return out;
}

struct Counts {
  long tp = 0, fp = 0, fn = 0;
};

inline Counts cell_counts(const Bits &pred, const Bits &truth, int only_class = -1) {
  Counts c;
  for (std::size_t i = 0; i < pred.size(); ++i)
    for (std::size_t h = 0; h < pred[i].size(); ++h) {
      if (only_class >= 0 && static_cast<int>(h) != only_class) continue;
      if (pred[i][h] == 1 && truth[i][h] == 1) c.tp++;
      if (pred[i][h] == 1 && truth[i][h] == 0) c.fp++;
      if (pred[i][h] == 0 && truth[i][h] == 1) c.fn++;
    }
  return c;
}

inline double micro_f1(const Bits &pred, const Bits &truth) {
  const auto c = cell_counts(pred, truth);
  if (c.tp + c.fp + c.fn == 0) return 0;
  return c.tp / (c.tp + 0.5 * (c.fn + c.fp));
}

// Returns -1 when no class is active.
inline double macro_f1(const Bits &pred, const Bits &truth) {
  double sum = 0;
  int active = 0;
  for (std::size_t h = 0; h < pred[0].size(); ++h) {
    const auto c = cell_counts(pred, truth, static_cast<int>(h));
    if (c.tp + c.fp + c.fn == 0) continue;
    sum += c.tp / (c.tp + 0.5 * (c.fn + c.fp));
    active++;
  }
  return active == 0 ? -1 : sum / active;
}

// A class is in the top R_j when fewer than R_j classes outrank it (higher
// posterior, or equal posterior and lower index).
inline double precision_at_r(const Rows &post, const Bits &truth) {
  double sum = 0;
  int counted = 0;
  for (std::size_t j = 0; j < post.size(); ++j) {
    int rj = 0;
    for (int v : truth[j]) rj += v;
    if (rj == 0) continue;
    int hits = 0;
    for (std::size_t h = 0; h < post[j].size(); ++h) {
      int better = 0;
      for (std::size_t g = 0; g < post[j].size(); ++g)
        if (post[j][g] > post[j][h] || (post[j][g] == post[j][h] && g < h)) better++;
      if (better < rj && truth[j][h] == 1) hits++;
    }
    sum += static_cast<double>(hits) / rj;
    counted++;
  }
  return sum / counted;
}

inline double phi(const Bits &y, std::size_t h, std::size_t p) {
  double n11 = 0, n00 = 0, n10 = 0, n01 = 0;
  for (const auto &row : y) {
    if (row[h] == 1 && row[p] == 1) n11++;
    if (row[h] == 0 && row[p] == 0) n00++;
    if (row[h] == 1 && row[p] == 0) n10++;
    if (row[h] == 0 && row[p] == 1) n01++;
  }
  const double d = (n11 + n10) * (n01 + n00) * (n11 + n01) * (n10 + n00);
  if (d == 0) return 0;
  return (n11 * n00 - n01 * n10) / std::sqrt(d);
}

inline double csd(const Bits &pred, const Bits &truth) {
  double s = 0;
  const std::size_t r = pred[0].size();
  for (std::size_t h = 0; h < r; ++h)
    for (std::size_t p = 0; p < r; ++p) {
      const double d = phi(pred, h, p) - phi(truth, h, p);
      s += d * d;
    }
  return std::sqrt(s);
}

inline Bits random_bits(std::mt19937_64 &rng, std::size_t rows, std::size_t cols,
                        double density) {
  std::bernoulli_distribution bit(density);
  Bits b(rows, std::vector<int>(cols));
  for (auto &row : b)
    for (auto &v : row) v = bit(rng) ? 1 : 0;
  return b;
}

inline Vec random_unit(std::mt19937_64 &rng, std::size_t dim) {
  std::normal_distribution<double> g;
  Vec v(dim);
  double n = 0;
  for (auto &x : v) {
    x = g(rng);
    n += x * x;
  }
  for (auto &x : v) x /= std::sqrt(n);
  return v;
}

}  // namespace oracle

#endif  // SCORE_TESTS_ORACLES_H_
