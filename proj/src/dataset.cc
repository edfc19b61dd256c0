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

#include "structprompt/dataset.h"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "structprompt/errors.h"
#include "structprompt/parser.h"
#include "structprompt/random.h"

namespace structprompt {
namespace {

using nlohmann::ordered_json;

std::string Describe(Color color, Shape shape) {
  return std::string(ColorName(color)) + " " + std::string(ShapeName(shape));
}

void CheckConfig(const DatasetConfig &config) {
  if (config.train <= 0 || config.val <= 0 || config.test <= 0) {
    throw Error("dataset split counts must be positive");
  }
  if (config.colors.empty() || config.shapes.empty() || config.relations.empty()) {
    throw Error("dataset vocabulary subsets must be non-empty");
  }
}

template <typename T>
const T &Pick(Rng &rng, const std::vector<T> &items) {
  return items[UniformInt(rng, 0, static_cast<int>(items.size()) - 1)];
}

std::string SampleId(Split split, int index) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%s-%05d", SplitName(split).data(), index);
  return buffer;
}

[[noreturn]] void SchemaFail(const std::string &message, size_t line) {
  throw SchemaError(message, line);
}

const ordered_json &Field(const ordered_json &json, const char *key, size_t line) {
  auto it = json.find(key);
  if (it == json.end()) SchemaFail(std::string("missing field '") + key + "'", line);
  return *it;
}

int IdFromJson(const ordered_json &value, size_t line) {
  if (!value.is_number_integer()) SchemaFail("object id must be an integer", line);
  return value.get<int>();
}

}  // namespace

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

SurfaceForm RelationSurfaceForm(Relation relation) {
  switch (relation) {
    case Relation::kLeftOf: return {"on the left of", ""};
    case Relation::kRightOf: return {"on the right of", ""};
    case Relation::kAbove: return {"above", ""};
    case Relation::kBelow: return {"below", ""};
    case Relation::kInFrontOf: return {"in front of", ""};
    case Relation::kBehind: return {"behind", ""};
    case Relation::kFrontLeftOf: return {"in front of", "on the left"};
    case Relation::kFrontRightOf: return {"in front of", "on the right"};
    case Relation::kBehindLeftOf: return {"behind", "on the left"};
    case Relation::kBehindRightOf: return {"behind", "on the right"};
  }
  return {};
}

Prompt Realize(const StructuredInfo &info) {
  const auto &objects = info.objects;
  bool shaped = !objects.empty() && objects.size() <= 2 && objects[0].id == 1 &&
                objects[0].anchor.has_value() &&
                info.relations.size() == objects.size() - 1;
  if (shaped && objects.size() == 2) {
    const RelationTuple &r = info.relations[0];
    shaped = objects[1].id == 2 && !objects[1].anchor && r.subject_id == 2 &&
             r.object_id == 1;
  }
  if (!shaped) throw Error("scene is not in generator shape: " + Serialize(info));

  std::string text = "Add a " + Describe(objects[0].color, objects[0].shape) +
                     " at the center.";
  if (objects.size() == 2) {
    SurfaceForm form = RelationSurfaceForm(info.relations[0].relation);
    text += " Add a " + Describe(objects[1].color, objects[1].shape) + " " +
            form.prefix + " it";
    if (!form.suffix.empty()) text += " " + form.suffix;
    text += ".";
  }
  return Prompt(text);
}

uint64_t SampleSpaceSize(const DatasetConfig &config) {
  uint64_t descriptions = config.colors.size() * config.shapes.size();
  if (descriptions < 2) return 0;
  return descriptions * (descriptions - 1) * config.relations.size();
}

std::vector<Sample> GenerateDataset(const DatasetConfig &config) {
  CheckConfig(config);
  const uint64_t demand = static_cast<uint64_t>(config.train) + config.val + config.test;
  const uint64_t space = SampleSpaceSize(config);
  if (demand > space) {
    throw VocabularyExhausted("requested " + std::to_string(demand) +
                              " distinct samples but the vocabulary allows only " +
                              std::to_string(space));
  }

  Rng rng(config.seed);
  const uint64_t max_attempts = 100 * demand;
  uint64_t attempts = 0;
  std::set<std::string> seen;
  std::vector<Sample> samples;
  samples.reserve(demand);

  const std::pair<Split, int> splits[] = {
      {Split::kTrain, config.train}, {Split::kVal, config.val}, {Split::kTest, config.test}};
  for (auto [split, count] : splits) {
    for (int index = 0; index < count;) {
      if (++attempts > max_attempts) {
        throw VocabularyExhausted("gave up after " + std::to_string(max_attempts) +
                                  " draws without finding enough distinct samples");
      }
      // Draw order is fixed: color, shape, color, shape, relation.
      Color first_color = Pick(rng, config.colors);
      Shape first_shape = Pick(rng, config.shapes);
      Color second_color = Pick(rng, config.colors);
      Shape second_shape = Pick(rng, config.shapes);
      Relation relation = Pick(rng, config.relations);
      if (first_color == second_color && first_shape == second_shape) continue;

      StructuredInfo info;
      info.objects = {{1, first_color, first_shape, Anchor::kCenter},
                      {2, second_color, second_shape, std::nullopt}};
      info.relations = {{2, relation, 1}};
      Prompt prompt = Realize(info);
      if (!seen.insert(prompt.text()).second) continue;

      Sample sample;
      sample.id = SampleId(split, index);
      sample.split = split;
      sample.prompt = std::move(prompt);
      sample.serialized = Serialize(info);
      sample.reference = std::move(info);
      samples.push_back(std::move(sample));
      ++index;
    }
  }
  return samples;
}

ordered_json SampleToJson(const Sample &sample) {
  ordered_json objects = ordered_json::array();
  for (const ObjectTuple &o : sample.reference.objects) {
    ordered_json anchor = nullptr;
    if (o.anchor) anchor = AnchorName(*o.anchor);
    objects.push_back({o.id, ColorName(o.color), ShapeName(o.shape), anchor});
  }
  ordered_json relations = ordered_json::array();
  for (const RelationTuple &r : sample.reference.relations) {
    relations.push_back({r.subject_id, RelationToken(r.relation), r.object_id});
  }
  ordered_json json;
  json["id"] = sample.id;
  json["split"] = SplitName(sample.split);
  json["prompt"] = sample.prompt.text();
  json["objects"] = std::move(objects);
  json["relations"] = std::move(relations);
  json["serialized"] = sample.serialized;
  return json;
}

Sample SampleFromJson(const ordered_json &json, size_t line) {
  if (!json.is_object()) SchemaFail("record is not a JSON object", line);
  Sample sample;

  const auto &id = Field(json, "id", line);
  if (!id.is_string()) SchemaFail("'id' must be a string", line);
  sample.id = id.get<std::string>();

  const auto &split = Field(json, "split", line);
  std::string split_name = split.is_string() ? split.get<std::string>() : "";
  if (split_name == "train") {
    sample.split = Split::kTrain;
  } else if (split_name == "val") {
    sample.split = Split::kVal;
  } else if (split_name == "test") {
    sample.split = Split::kTest;
  } else {
    SchemaFail("'split' must be one of train, val, test", line);
  }

  const auto &prompt = Field(json, "prompt", line);
  if (!prompt.is_string()) SchemaFail("'prompt' must be a string", line);
  try {
    sample.prompt = Prompt(prompt.get<std::string>());
  } catch (const Error &e) {
    SchemaFail(e.what(), line);
  }

  const auto &objects = Field(json, "objects", line);
  if (!objects.is_array()) SchemaFail("'objects' must be an array", line);
  for (const auto &entry : objects) {
    if (!entry.is_array() || entry.size() != 4) {
      SchemaFail("object entries must be [id, color, shape, anchor|null]", line);
    }
    ObjectTuple object;
    object.id = IdFromJson(entry[0], line);
    auto color = entry[1].is_string() ? ColorFromName(entry[1].get<std::string>())
                                      : std::nullopt;
    auto shape = entry[2].is_string() ? ShapeFromName(entry[2].get<std::string>())
                                      : std::nullopt;
    if (!color) SchemaFail("unknown color " + entry[1].dump(), line);
    if (!shape) SchemaFail("unknown shape " + entry[2].dump(), line);
    object.color = *color;
    object.shape = *shape;
    if (!entry[3].is_null()) {
      if (entry[3] != AnchorName(Anchor::kCenter)) {
        SchemaFail("unknown anchor " + entry[3].dump(), line);
      }
      object.anchor = Anchor::kCenter;
    }
    sample.reference.objects.push_back(object);
  }

  const auto &relations = Field(json, "relations", line);
  if (!relations.is_array()) SchemaFail("'relations' must be an array", line);
  for (const auto &entry : relations) {
    if (!entry.is_array() || entry.size() != 3) {
      SchemaFail("relation entries must be [subject_id, relation, object_id]", line);
    }
    RelationTuple relation;
    relation.subject_id = IdFromJson(entry[0], line);
    auto name = entry[1].is_string() ? RelationFromToken(entry[1].get<std::string>())
                                     : std::nullopt;
    if (!name) SchemaFail("unknown relation " + entry[1].dump(), line);
    relation.relation = *name;
    relation.object_id = IdFromJson(entry[2], line);
    sample.reference.relations.push_back(relation);
  }

  if (auto violations = Validate(sample.reference); !violations.empty()) {
    SchemaFail(violations.front(), line);
  }

  const auto &serialized = Field(json, "serialized", line);
  if (!serialized.is_string()) SchemaFail("'serialized' must be a string", line);
  sample.serialized = serialized.get<std::string>();
  if (sample.serialized != Serialize(sample.reference)) {
    SchemaFail("'serialized' does not match objects and relations", line);
  }
  return sample;
}

std::string ToJsonl(const std::vector<Sample> &samples) {
  std::string out;
  for (const Sample &sample : samples) {
    out += SampleToJson(sample).dump();
    out += '\n';
  }
  return out;
}

void WriteJsonl(const std::vector<Sample> &samples, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << ToJsonl(samples);
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<Sample> ReadJsonl(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<Sample> samples;
  std::string text;
  size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json json;
    try {
      json = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
      throw SchemaError(std::string("invalid JSON: ") + e.what(), line);
    }
    samples.push_back(SampleFromJson(json, line));
  }
  if (in.bad()) throw IoError("read failed for " + path.string());
  return samples;
}

std::vector<std::string> CheckSample(const Sample &sample) {
  std::vector<std::string> problems = Validate(sample.reference);
  if (!problems.empty()) return problems;
  if (Serialize(sample.reference) != sample.serialized) {
    problems.push_back(sample.id + ": serialized text differs from reference");
  }
  try {
    if (ParsePrompt(sample.prompt) != sample.reference) {
      problems.push_back(sample.id + ": parsed prompt differs from reference");
    }
  } catch (const ParseError &e) {
    problems.push_back(sample.id + ": " + e.what());
  }
  return problems;
}

}  // namespace structprompt
