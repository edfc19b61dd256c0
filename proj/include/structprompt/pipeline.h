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

#ifndef STRUCTPROMPT_PIPELINE_H_
#define STRUCTPROMPT_PIPELINE_H_

// End-to-end run: generate -> parse -> score parses -> augment -> solve ->
// render -> judge, plus a scrambled-layout baseline, repeated per seed and
// aggregated as mean +- std.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "structprompt/dataset.h"
#include "structprompt/judge.h"
#include "structprompt/layout.h"
#include "structprompt/metrics.h"

namespace structprompt {

struct RunConfig {
  std::vector<uint64_t> seeds{40, 41, 42};
  // The seed field is replaced by each run seed.
  DatasetConfig dataset;
  Canvas canvas;
  std::filesystem::path output_dir;
  // PPMs written per seed and variant; negative writes every image.
  int max_images = -1;
};

// Per-seed results of one pass over the pipeline.
struct SeedResult {
  uint64_t seed = 0;
  double exact_match = 0.0;
  double bleu = 0.0;
  double rouge_l = 0.0;
  AlignmentCounts faithful;
  AlignmentCounts scrambled;
};

struct RunResult {
  std::vector<SeedResult> seeds;
  MetricValue exact_match;
  MetricValue bleu;
  MetricValue rouge_l;
  AlignmentReport faithful;
  AlignmentReport scrambled;
};

// Runs the whole pipeline and writes its artifacts under
// cfg.output_dir (skipped when output_dir is empty). Errors are rethrown as
// PipelineError naming the failing stage.
RunResult RunPipeline(const RunConfig &cfg);

nlohmann::ordered_json RunResultToJson(const RunConfig &cfg, const RunResult &result);
// Table-style text summary with "mean ± std" cells.
std::string RunResultToText(const RunResult &result);

}  // namespace structprompt

#endif  // STRUCTPROMPT_PIPELINE_H_
