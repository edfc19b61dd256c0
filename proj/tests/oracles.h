// Copyright 2026 The StructPrompt Authors.
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

#ifndef STRUCTPROMPT_TESTS_ORACLES_H_
#define STRUCTPROMPT_TESTS_ORACLES_H_

// Brute-force reference implementations used only by tests. They are
// written directly from the metric and relation definitions and share no
// code with the library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "structprompt/tuple.h"

namespace structprompt::oracle {

using Tokens = std::vector<std::string>;

inline bool NgramAt(const Tokens &seq, size_t i, const Tokens &gram) {
  if (i + gram.size() > seq.size()) return false;
  for (size_t k = 0; k < gram.size(); ++k) {
    if (seq[i + k] != gram[k]) return false;
  }
  return true;
}

inline int64_t Occurrences(const Tokens &seq, const Tokens &gram) {
  int64_t count = 0;
  for (size_t i = 0; i + gram.size() <= seq.size(); ++i) count += NgramAt(seq, i, gram);
  return count;
}

// Cumulative BLEU-4, uniform weights, clipped counts, brevity penalty, no
// smoothing; n runs up to min(4, |candidate|).
inline double Bleu(const Tokens &cand, const Tokens &ref) {
  size_t orders = std::min<size_t>(4, cand.size());
  if (orders == 0) return 0.0;
  double product = 1.0;
  for (size_t n = 1; n <= orders; ++n) {
    int64_t clipped = 0;
    for (size_t i = 0; i + n <= cand.size(); ++i) {
      Tokens gram(cand.begin() + i, cand.begin() + i + n);
      bool first = true;
      for (size_t j = 0; j < i; ++j) {
        if (NgramAt(cand, j, gram)) first = false;
      }
      if (!first) continue;
      clipped += std::min(Occurrences(cand, gram), Occurrences(ref, gram));
    }
    double precision = static_cast<double>(clipped) / static_cast<double>(cand.size() - n + 1);
    if (precision == 0.0) return 0.0;
    product *= precision;
  }
  double c = static_cast<double>(cand.size());
  double r = static_cast<double>(ref.size());
  double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  return bp * std::pow(product, 1.0 / static_cast<double>(orders));
}

// LCS by enumerating every subsequence of `a` (|a| <= ~16).
inline size_t Lcs(const Tokens &a, const Tokens &b) {
  size_t best = 0;
  for (uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
    size_t length = static_cast<size_t>(__builtin_popcount(mask));
    if (length <= best) continue;
    size_t j = 0;
    bool ok = true;
    for (size_t i = 0; i < a.size() && ok; ++i) {
      if (!(mask & (1u << i))) continue;
      while (j < b.size() && b[j] != a[i]) ++j;
      if (j == b.size()) ok = false;
      ++j;
    }
    if (ok) best = length;
  }
  return best;
}

struct Rouge {
  double precision, recall, f1;
};

inline Rouge RougeL(const Tokens &cand, const Tokens &ref) {
  double l = static_cast<double>(Lcs(cand, ref));
  if (l == 0) return {0, 0, 0};
  double p = l / cand.size();
  double r = l / ref.size();
  return {p, r, 2 * p * r / (p + r)};
}

// Single-split Inception Score as exp(mean_x [sum p log p - sum p log q]).
inline double InceptionScore(const std::vector<std::vector<double>> &rows) {
  size_t k = rows[0].size();
  std::vector<double> q(k, 0.0);
  for (size_t c = 0; c < k; ++c) {
    for (const auto &row : rows) q[c] += row[c];
    q[c] /= rows.size();
  }
  double total = 0.0;
  for (const auto &row : rows) {
    double neg_entropy = 0.0, cross = 0.0;
    for (size_t c = 0; c < k; ++c) {
      if (row[c] == 0.0) continue;
      neg_entropy += row[c] * std::log(row[c]);
      cross += row[c] * std::log(q[c]);
    }
    total += neg_entropy - cross;
  }
  return std::exp(total / rows.size());
}

inline double CrossEntropy(const Tokens &ref, const Tokens &vocab,
                           const std::vector<std::vector<double>> &rows) {
  double total = 0.0;
  for (size_t i = 0; i < ref.size(); ++i) {
    for (size_t v = 0; v < vocab.size(); ++v) {
      if (vocab[v] == ref[i]) total += -std::log(rows[i][v]);
    }
  }
  return total;
}

// Relation truth conditions, x rightward and y downward, front = lower.
inline bool Holds(double sx, double sy, double ox, double oy, Relation r, double m) {
  bool right = sx > ox + m, left = sx < ox - m;
  bool lower = sy > oy + m, higher = sy < oy - m;
  switch (r) {
    case Relation::kRightOf: return right;
    case Relation::kLeftOf: return left;
    case Relation::kAbove: return higher;
    case Relation::kBelow: return lower;
    case Relation::kInFrontOf: return lower;
    case Relation::kBehind: return higher;
    case Relation::kFrontRightOf: return lower && right;
    case Relation::kFrontLeftOf: return lower && left;
    case Relation::kBehindRightOf: return higher && right;
    case Relation::kBehindLeftOf: return higher && left;
  }
  return false;
}

// Whether some assignment of the objects to points of a side x side grid
// (unit spacing, margin 0) satisfies every relation.
inline bool SatisfiableOnGrid(int objects, const std::vector<RelationTuple> &relations,
                              int side) {
  std::vector<int> cell(objects, 0);
  const int cells = side * side;
  for (;;) {
    bool all = true;
    for (const RelationTuple &r : relations) {
      int s = cell[r.subject_id - 1], o = cell[r.object_id - 1];
      if (!Holds(s % side, s / side, o % side, o / side, r.relation, 0)) {
        all = false;
        break;
      }
    }
    if (all) return true;
    int k = 0;
    while (k < objects && ++cell[k] == cells) cell[k++] = 0;
    if (k == objects) return false;
  }
}

// Probability that `relation` holds between two boxes of side `size` placed
// uniformly at integer centers on the canvas, conditioned on the boxes
// being at least `gap` pixels apart on some axis. Monte Carlo with joint
// rejection.
inline double ChanceRate(Relation relation, int width, int height, int size, int gap,
                         double margin, int draws, uint64_t seed) {
  std::mt19937_64 rng(seed);
  int low = (size + 1) / 2;
  std::uniform_int_distribution<int> xs(low, width - low), ys(low, height - low);
  int accepted = 0, hits = 0;
  while (accepted < draws) {
    int ax = xs(rng), ay = ys(rng), bx = xs(rng), by = ys(rng);
    bool apart = std::abs(ax - bx) >= size + gap || std::abs(ay - by) >= size + gap;
    if (!apart) continue;
    ++accepted;
    hits += Holds(ax, ay, bx, by, relation, margin);
  }
  return static_cast<double>(hits) / draws;
}

}  // namespace structprompt::oracle

#endif  // STRUCTPROMPT_TESTS_ORACLES_H_
