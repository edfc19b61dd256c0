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

#ifndef STRUCTPROMPT_METRICS_H_
#define STRUCTPROMPT_METRICS_H_

// Scoring functions: token cross-entropy, BLEU-4, ROUGE-L, Inception Score
// and mean +- std aggregation. Natural logarithms throughout.

#include <string>
#include <string_view>
#include <vector>

namespace structprompt {

using TokenSequence = std::vector<std::string>;

// Whitespace tokenization.
TokenSequence Tokenize(std::string_view text);

// Per-position probability vectors over a shared vocabulary.
struct DistributionSequence {
  std::vector<std::string> vocabulary;
  std::vector<std::vector<double>> rows;
};

struct CrossEntropy {
  double value = 0.0;
  // Set when some reference token had zero predicted probability; value is
  // then +infinity.
  bool zero_probability = false;
};

// Sum over positions of -log p(reference token). Throws LengthMismatch, or
// Error when a row is not a distribution or a token is not in the vocabulary.
CrossEntropy TokenCrossEntropy(const TokenSequence &reference,
                               const DistributionSequence &predicted);

// Cumulative BLEU-4 with uniform weights, clipped counts, brevity penalty and
// no smoothing. Candidates shorter than four tokens use n up to their length.
double Bleu(const TokenSequence &candidate, const TokenSequence &reference);

// Corpus BLEU: clipped counts and lengths are summed over all pairs before
// the precisions and brevity penalty are formed.
double CorpusBleu(const std::vector<TokenSequence> &candidates,
                  const std::vector<TokenSequence> &references);

struct RougeL {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

RougeL RougeLScore(const TokenSequence &candidate, const TokenSequence &reference);

size_t LongestCommonSubsequence(const TokenSequence &a, const TokenSequence &b);

struct MetricValue {
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> per_seed;
  // True when std was forced to 0 because only one value was available.
  bool single_value = false;

  // "0.473 ± 0.004" with `digits` decimals.
  std::string Format(int digits = 3) const;
};

// Arithmetic mean and sample (n - 1) standard deviation. Throws EmptyInput.
MetricValue AggregateSeeds(const std::vector<double> &values);

// Inverse of MetricValue::Format for "<mean> ± <std>" strings. Throws Error.
std::pair<double, double> ParseMeanStd(std::string_view text);

// Class-probability rows, one per image.
using ProbMatrix = std::vector<std::vector<double>>;

// Rows are split into `splits` contiguous chunks; each chunk scores
// exp(mean_x KL(p(y|x) || p(y))) against its own marginal. Throws
// DegenerateRow for rows that are not distributions over a common k, and
// Error when splits is out of range.
MetricValue InceptionScore(const ProbMatrix &probs, int splits = 1);

// Reads one comma-separated row per line. Throws IoError or DegenerateRow.
ProbMatrix ParseProbCsv(std::string_view text);

}  // namespace structprompt

#endif  // STRUCTPROMPT_METRICS_H_
