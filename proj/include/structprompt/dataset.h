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

#ifndef STRUCTPROMPT_DATASET_H_
#define STRUCTPROMPT_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "structprompt/tuple.h"

namespace structprompt {

enum class Split { kTrain, kVal, kTest };

std::string_view SplitName(Split split);

struct DatasetConfig {
  int train = 500;
  int val = 100;
  int test = 1000;
  uint64_t seed = 42;
  std::vector<Color> colors{kAllColors.begin(), kAllColors.end()};
  std::vector<Shape> shapes{kAllShapes.begin(), kAllShapes.end()};
  std::vector<Relation> relations{kAllRelations.begin(), kAllRelations.end()};
};

struct Sample {
  std::string id;
  Split split = Split::kTrain;
  Prompt prompt{"-"};
  StructuredInfo reference;
  std::string serialized;

  bool operator==(const Sample &) const = default;
};

// Surface form the generator uses for each relation, with "it" as the
// reference: prefix + " it" + (suffix.empty() ? "" : " " + suffix).
struct SurfaceForm {
  std::string prefix;
  std::string suffix;
};
SurfaceForm RelationSurfaceForm(Relation relation);

// Text emitter for generator-shaped scenes: an anchored first object and a
// second object related to it, e.g.
//   Add a purple cube at the center. Add a brown cube in front of it on the right.
// Throws Error for scenes outside that shape.
Prompt Realize(const StructuredInfo &info);

// Number of distinct scenes the configured vocabulary can produce. The two
// objects must have different (color, shape) descriptions.
uint64_t SampleSpaceSize(const DatasetConfig &config);

// Emits train, then val, then test samples. Prompts are unique across the
// whole dataset. Throws VocabularyExhausted when the demand exceeds the
// sample space or rejection sampling hits its attempt cap.
std::vector<Sample> GenerateDataset(const DatasetConfig &config);

nlohmann::ordered_json SampleToJson(const Sample &sample);
// Throws SchemaError tagged with `line`.
Sample SampleFromJson(const nlohmann::ordered_json &json, size_t line);

// One JSON object per line. Throws IoError.
void WriteJsonl(const std::vector<Sample> &samples, const std::filesystem::path &path);
std::string ToJsonl(const std::vector<Sample> &samples);
// Throws IoError or SchemaError.
std::vector<Sample> ReadJsonl(const std::filesystem::path &path);

// Checks the sample invariants (serialization and prompt parse agree with
// the reference). Empty when the sample is consistent.
std::vector<std::string> CheckSample(const Sample &sample);

}  // namespace structprompt

#endif  // STRUCTPROMPT_DATASET_H_
