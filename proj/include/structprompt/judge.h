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

#ifndef STRUCTPROMPT_JUDGE_H_
#define STRUCTPROMPT_JUDGE_H_

// Geometric judge: finds colored shapes in a rendered image and answers
// yes/no questions about their positions, colors and shapes.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "structprompt/dataset.h"
#include "structprompt/metrics.h"
#include "structprompt/render.h"
#include "structprompt/tuple.h"

namespace structprompt {

struct DetectedObject {
  Color color = Color::kRed;
  Shape shape = Shape::kCube;
  // Center of the pixel bounding box, in pixel-center coordinates.
  double cx = 0.0;
  double cy = 0.0;
  // Inclusive pixel bounds.
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  int64_t pixel_count = 0;

  double FillRatio() const;
};

// Fill-ratio thresholds: >= 0.95 cube, [0.68, 0.95) sphere, below triangle.
inline constexpr double kCubeMinFill = 0.95;
inline constexpr double kSphereMinFill = 0.68;
Shape ClassifyFillRatio(double ratio);

// One object per 4-connected component of same-colored foreground pixels,
// ordered by first pixel in row-major order. Throws UnknownColor for pixels
// outside the palette and EmptyScene when nothing is found.
std::vector<DetectedObject> DetectScene(const RasterImage &image, const Palette &palette);

struct ObjectDescription {
  Color color = Color::kRed;
  Shape shape = Shape::kCube;
};

enum class QueryKind { kSpatial, kColor, kShape };

struct Query {
  QueryKind kind = QueryKind::kSpatial;
  // Spatial: "is `subject` <relation> `object`?"
  ObjectDescription subject;
  Relation relation = Relation::kLeftOf;
  ObjectDescription object;
  // Color / shape: "is the `subject` object <expected attribute>?"
  Color expected_color = Color::kRed;
  Shape expected_shape = Shape::kCube;

  static Query Spatial(ObjectDescription subject, Relation relation,
                       ObjectDescription object);
  static Query ColorOf(ObjectDescription subject, Color expected);
  static Query ShapeOf(ObjectDescription subject, Shape expected);
};

enum class Answer { kYes, kNo, kUndecidable };

// Described objects are matched to detections by (color, shape). A missing
// or duplicated match is undecidable.
Answer AnswerQuery(std::span<const DetectedObject> scene, const Query &query,
                   double margin);

// Integer yes/total counts for one evaluation run.
struct AlignmentCounts {
  int64_t spatial_yes = 0;
  int64_t spatial_total = 0;
  int64_t color_yes = 0;
  int64_t color_total = 0;
  int64_t shape_yes = 0;
  int64_t shape_total = 0;
  int64_t samples = 0;

  double Spatial() const;
  double ColorRate() const;
  double ShapeRate() const;
  AlignmentCounts &operator+=(const AlignmentCounts &other);
};

// Queries derived from a sample: one spatial query per relation tuple and
// one color and one shape query per object.
std::vector<Query> QueriesFor(const StructuredInfo &reference);

// Judges one image. Undecidable answers count as "no". Scenes that fail
// detection score "no" on every query.
AlignmentCounts JudgeSample(const Sample &sample, const RasterImage &image,
                            const Palette &palette, double margin);

// Throws CountMismatch when the number of images differs from the samples.
AlignmentCounts EvaluateAlignment(std::span<const Sample> samples,
                                  std::span<const RasterImage> images,
                                  const Palette &palette, double margin);

struct AlignmentReport {
  MetricValue spatial;
  MetricValue color;
  MetricValue shape;
  int64_t n = 0;
};

// Aggregates per-seed proportions into mean +- sample std. Throws EmptyInput.
AlignmentReport MakeReport(const std::vector<AlignmentCounts> &per_seed);

// {"spatial": {"mean", "std", "per_seed"}, "color": ..., "shape": ..., "n"}
nlohmann::ordered_json ReportToJson(const AlignmentReport &report);
nlohmann::ordered_json MetricToJson(const MetricValue &value);

}  // namespace structprompt

#endif  // STRUCTPROMPT_JUDGE_H_
