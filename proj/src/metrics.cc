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

#include "structprompt/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "structprompt/errors.h"

namespace structprompt {
namespace {

constexpr double kSumTolerance = 1e-9;
constexpr std::string_view kPlusMinus = "\xC2\xB1";  // U+00B1

using NgramCounts = std::map<std::vector<std::string>, int64_t>;

NgramCounts CountNgrams(const TokenSequence &tokens, size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

int64_t ClippedMatches(const TokenSequence &candidate, const TokenSequence &reference,
                       size_t n) {
  NgramCounts reference_counts = CountNgrams(reference, n);
  int64_t matches = 0;
  for (const auto &[gram, count] : CountNgrams(candidate, n)) {
    auto it = reference_counts.find(gram);
    if (it != reference_counts.end()) matches += std::min(count, it->second);
  }
  return matches;
}

// Geometric mean of matches[n] / totals[n] for n < orders, times the brevity
// penalty. Zero when any precision is zero.
double CombineBleu(const std::vector<int64_t> &matches, const std::vector<int64_t> &totals,
                   size_t orders, double candidate_length, double reference_length) {
  if (orders == 0) return 0.0;
  double log_sum = 0.0;
  for (size_t n = 0; n < orders; ++n) {
    if (matches[n] == 0 || totals[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matches[n]) / static_cast<double>(totals[n]));
  }
  double penalty = 1.0;
  if (candidate_length < reference_length) {
    penalty = std::exp(1.0 - reference_length / candidate_length);
  }
  return penalty * std::exp(log_sum / static_cast<double>(orders));
}

void CheckDistribution(const std::vector<double> &row, size_t k, const std::string &where) {
  if (row.size() != k) {
    throw DegenerateRow(where + ": expected " + std::to_string(k) + " entries, got " +
                        std::to_string(row.size()));
  }
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw DegenerateRow(where + ": probabilities must be finite and non-negative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw DegenerateRow(where + ": probabilities sum to " + std::to_string(sum));
  }
}

}  // namespace

TokenSequence Tokenize(std::string_view text) {
  TokenSequence tokens;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

CrossEntropy TokenCrossEntropy(const TokenSequence &reference,
                               const DistributionSequence &predicted) {
  if (reference.size() != predicted.rows.size()) {
    throw LengthMismatch("reference has " + std::to_string(reference.size()) +
                         " tokens but prediction has " +
                         std::to_string(predicted.rows.size()) + " positions");
  }
  std::unordered_map<std::string, size_t> index;
  for (size_t i = 0; i < predicted.vocabulary.size(); ++i) {
    index.emplace(predicted.vocabulary[i], i);
  }
  CrossEntropy result;
  for (size_t i = 0; i < reference.size(); ++i) {
    try {
      CheckDistribution(predicted.rows[i], predicted.vocabulary.size(),
                        "position " + std::to_string(i));
    } catch (const DegenerateRow &e) {
      throw Error(e.what());
    }
    auto it = index.find(reference[i]);
    if (it == index.end()) {
      throw Error("reference token '" + reference[i] + "' is not in the vocabulary");
    }
    double p = predicted.rows[i][it->second];
    if (p == 0.0) {
      result.zero_probability = true;
      result.value = std::numeric_limits<double>::infinity();
      continue;
    }
    if (!result.zero_probability) result.value -= std::log(p);
  }
  return result;
}

double Bleu(const TokenSequence &candidate, const TokenSequence &reference) {
  size_t orders = std::min<size_t>(4, candidate.size());
  std::vector<int64_t> matches(orders), totals(orders);
  for (size_t n = 1; n <= orders; ++n) {
    matches[n - 1] = ClippedMatches(candidate, reference, n);
    totals[n - 1] = static_cast<int64_t>(candidate.size() - n + 1);
  }
  return CombineBleu(matches, totals, orders, static_cast<double>(candidate.size()),
                     static_cast<double>(reference.size()));
}

double CorpusBleu(const std::vector<TokenSequence> &candidates,
                  const std::vector<TokenSequence> &references) {
  if (candidates.size() != references.size()) {
    throw LengthMismatch("corpus BLEU needs one reference per candidate");
  }
  std::vector<int64_t> matches(4, 0), totals(4, 0);
  double candidate_length = 0.0;
  double reference_length = 0.0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    candidate_length += static_cast<double>(candidates[i].size());
    reference_length += static_cast<double>(references[i].size());
    for (size_t n = 1; n <= 4; ++n) {
      matches[n - 1] += ClippedMatches(candidates[i], references[i], n);
      if (candidates[i].size() >= n) {
        totals[n - 1] += static_cast<int64_t>(candidates[i].size() - n + 1);
      }
    }
  }
  size_t orders = 0;
  while (orders < 4 && totals[orders] > 0) ++orders;
  return CombineBleu(matches, totals, orders, candidate_length, reference_length);
}

size_t LongestCommonSubsequence(const TokenSequence &a, const TokenSequence &b) {
  std::vector<size_t> previous(b.size() + 1, 0), current(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      current[j] = a[i - 1] == b[j - 1] ? previous[j - 1] + 1
                                        : std::max(previous[j], current[j - 1]);
    }
    std::swap(previous, current);
  }
  return previous[b.size()];
}

RougeL RougeLScore(const TokenSequence &candidate, const TokenSequence &reference) {
  RougeL score;
  size_t lcs = LongestCommonSubsequence(candidate, reference);
  if (lcs == 0) return score;
  score.precision = static_cast<double>(lcs) / static_cast<double>(candidate.size());
  score.recall = static_cast<double>(lcs) / static_cast<double>(reference.size());
  score.f1 = 2.0 * score.precision * score.recall / (score.precision + score.recall);
  return score;
}

std::string MetricValue::Format(int digits) const {
  char buffer[96];
  std::snprintf(buffer, sizeof(buffer), "%.*f %s %.*f", digits, mean,
                std::string(kPlusMinus).c_str(), digits, std);
  return buffer;
}

MetricValue AggregateSeeds(const std::vector<double> &values) {
  if (values.empty()) throw EmptyInput("no values to aggregate");
  MetricValue out;
  out.per_seed = values;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() == 1) {
    out.single_value = true;
    return out;
  }
  double squares = 0.0;
  for (double v : values) squares += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(squares / (n - 1.0));
  return out;
}

std::pair<double, double> ParseMeanStd(std::string_view text) {
  size_t mark = text.find(kPlusMinus);
  if (mark == std::string_view::npos) throw Error("missing '\xC2\xB1' in mean/std text");
  std::string mean_text(text.substr(0, mark));
  std::string std_text(text.substr(mark + kPlusMinus.size()));
  char *end = nullptr;
  double mean = std::strtod(mean_text.c_str(), &end);
  if (end == mean_text.c_str()) throw Error("mean is not a number");
  double spread = std::strtod(std_text.c_str(), &end);
  if (end == std_text.c_str()) throw Error("std is not a number");
  return {mean, spread};
}

MetricValue InceptionScore(const ProbMatrix &probs, int splits) {
  if (probs.empty()) throw EmptyInput("inception score needs at least one row");
  if (splits < 1 || static_cast<size_t>(splits) > probs.size()) {
    throw Error("inception score needs 1 <= splits <= rows");
  }
  const size_t k = probs.front().size();
  if (k == 0) throw DegenerateRow("row 0: no classes");
  for (size_t i = 0; i < probs.size(); ++i) {
    CheckDistribution(probs[i], k, "row " + std::to_string(i));
  }

  const size_t rows = probs.size();
  std::vector<double> scores;
  for (size_t s = 0; s < static_cast<size_t>(splits); ++s) {
    size_t begin = s * rows / splits;
    size_t end = (s + 1) * rows / splits;
    std::vector<double> marginal(k, 0.0);
    for (size_t i = begin; i < end; ++i) {
      for (size_t c = 0; c < k; ++c) marginal[c] += probs[i][c];
    }
    for (double &m : marginal) m /= static_cast<double>(end - begin);
    double kl_sum = 0.0;
    for (size_t i = begin; i < end; ++i) {
      for (size_t c = 0; c < k; ++c) {
        double p = probs[i][c];
        // 0 log 0 = 0; p > 0 implies marginal[c] > 0.
        if (p > 0.0) kl_sum += p * std::log(p / marginal[c]);
      }
    }
    scores.push_back(std::exp(kl_sum / static_cast<double>(end - begin)));
  }
  return AggregateSeeds(scores);
}

ProbMatrix ParseProbCsv(std::string_view text) {
  ProbMatrix matrix;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      char *end = nullptr;
      double value = std::strtod(cell.c_str(), &end);
      while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
      if (end == cell.c_str() || (end && *end != '\0')) {
        throw DegenerateRow("line " + std::to_string(line_number) + ": '" + cell +
                            "' is not a number");
      }
      row.push_back(value);
    }
    matrix.push_back(std::move(row));
  }
  if (matrix.empty()) throw EmptyInput("probability CSV has no rows");
  return matrix;
}

}  // namespace structprompt
