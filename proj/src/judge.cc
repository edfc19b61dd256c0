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

#include "structprompt/judge.h"

#include <algorithm>

#include "structprompt/errors.h"
#include "structprompt/layout.h"

namespace structprompt {
namespace {

using nlohmann::ordered_json;

bool Matches(const DetectedObject &d, const ObjectDescription &desc) {
  return d.color == desc.color && d.shape == desc.shape;
}

// The unique detection matching `desc`, or nullptr when absent or ambiguous.
const DetectedObject *Resolve(std::span<const DetectedObject> scene,
                              const ObjectDescription &desc) {
  const DetectedObject *found = nullptr;
  for (const DetectedObject &d : scene) {
    if (!Matches(d, desc)) continue;
    if (found) return nullptr;
    found = &d;
  }
  return found;
}

double Ratio(int64_t yes, int64_t total) {
  return total == 0 ? 0.0 : static_cast<double>(yes) / static_cast<double>(total);
}

}  // namespace

double DetectedObject::FillRatio() const {
  double area = static_cast<double>(x1 - x0 + 1) * static_cast<double>(y1 - y0 + 1);
  return static_cast<double>(pixel_count) / area;
}

Shape ClassifyFillRatio(double ratio) {
  if (ratio >= kCubeMinFill) return Shape::kCube;
  if (ratio >= kSphereMinFill) return Shape::kSphere;
  return Shape::kTriangle;
}

std::vector<DetectedObject> DetectScene(const RasterImage &image, const Palette &palette) {
  const int w = image.width;
  const int h = image.height;
  // -1: background, -2: foreground not yet labeled, >= 0: palette index.
  std::vector<int8_t> color_index(static_cast<size_t>(w) * h, -1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Rgb rgb = image.At(x, y);
      if (rgb == palette.background()) continue;
      auto color = palette.Lookup(rgb);
      if (!color) {
        throw UnknownColor("pixel (" + std::to_string(x) + ", " + std::to_string(y) +
                           ") is not a palette color");
      }
      color_index[static_cast<size_t>(y) * w + x] = static_cast<int8_t>(*color);
    }
  }

  std::vector<bool> visited(color_index.size(), false);
  std::vector<DetectedObject> objects;
  std::vector<size_t> stack;
  for (size_t start = 0; start < color_index.size(); ++start) {
    if (color_index[start] < 0 || visited[start]) continue;
    const int8_t label = color_index[start];
    DetectedObject object;
    object.color = static_cast<Color>(label);
    object.x0 = w;
    object.y0 = h;
    object.x1 = -1;
    object.y1 = -1;
    visited[start] = true;
    stack.push_back(start);
    while (!stack.empty()) {
      size_t at = stack.back();
      stack.pop_back();
      int x = static_cast<int>(at % w);
      int y = static_cast<int>(at / w);
      ++object.pixel_count;
      object.x0 = std::min(object.x0, x);
      object.x1 = std::max(object.x1, x);
      object.y0 = std::min(object.y0, y);
      object.y1 = std::max(object.y1, y);
      auto push = [&](int nx, int ny) {
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) return;
        size_t next = static_cast<size_t>(ny) * w + nx;
        if (visited[next] || color_index[next] != label) return;
        visited[next] = true;
        stack.push_back(next);
      };
      push(x + 1, y);
      push(x - 1, y);
      push(x, y + 1);
      push(x, y - 1);
    }
    // Pixel x covers [x, x + 1), so the box spans [x0, x1 + 1).
    object.cx = (object.x0 + object.x1 + 1) / 2.0;
    object.cy = (object.y0 + object.y1 + 1) / 2.0;
    object.shape = ClassifyFillRatio(object.FillRatio());
    objects.push_back(object);
  }
  if (objects.empty()) throw EmptyScene("no foreground objects in image");
  return objects;
}

Query Query::Spatial(ObjectDescription subject, Relation relation,
                     ObjectDescription object) {
  Query q;
  q.kind = QueryKind::kSpatial;
  q.subject = subject;
  q.relation = relation;
  q.object = object;
  return q;
}

Query Query::ColorOf(ObjectDescription subject, Color expected) {
  Query q;
  q.kind = QueryKind::kColor;
  q.subject = subject;
  q.expected_color = expected;
  return q;
}

Query Query::ShapeOf(ObjectDescription subject, Shape expected) {
  Query q;
  q.kind = QueryKind::kShape;
  q.subject = subject;
  q.expected_shape = expected;
  return q;
}

Answer AnswerQuery(std::span<const DetectedObject> scene, const Query &query,
                   double margin) {
  const DetectedObject *subject = Resolve(scene, query.subject);
  if (!subject) return Answer::kUndecidable;
  switch (query.kind) {
    case QueryKind::kSpatial: {
      const DetectedObject *object = Resolve(scene, query.object);
      if (!object || object == subject) return Answer::kUndecidable;
      return RelationHoldsAt(subject->cx, subject->cy, object->cx, object->cy,
                             query.relation, margin)
                 ? Answer::kYes
                 : Answer::kNo;
    }
    case QueryKind::kColor:
      return subject->color == query.expected_color ? Answer::kYes : Answer::kNo;
    case QueryKind::kShape:
      return subject->shape == query.expected_shape ? Answer::kYes : Answer::kNo;
  }
  return Answer::kUndecidable;
}

double AlignmentCounts::Spatial() const { return Ratio(spatial_yes, spatial_total); }
double AlignmentCounts::ColorRate() const { return Ratio(color_yes, color_total); }
double AlignmentCounts::ShapeRate() const { return Ratio(shape_yes, shape_total); }

AlignmentCounts &AlignmentCounts::operator+=(const AlignmentCounts &other) {
  spatial_yes += other.spatial_yes;
  spatial_total += other.spatial_total;
  color_yes += other.color_yes;
  color_total += other.color_total;
  shape_yes += other.shape_yes;
  shape_total += other.shape_total;
  samples += other.samples;
  return *this;
}

std::vector<Query> QueriesFor(const StructuredInfo &reference) {
  auto describe = [&](int id) {
    const ObjectTuple *o = reference.Find(id);
    if (!o) throw InvalidStructuredInfo({"dangling id " + std::to_string(id)});
    return ObjectDescription{o->color, o->shape};
  };
  std::vector<Query> queries;
  for (const RelationTuple &r : reference.relations) {
    queries.push_back(Query::Spatial(describe(r.subject_id), r.relation, describe(r.object_id)));
  }
  for (const ObjectTuple &o : reference.objects) {
    queries.push_back(Query::ColorOf({o.color, o.shape}, o.color));
    queries.push_back(Query::ShapeOf({o.color, o.shape}, o.shape));
  }
  return queries;
}

AlignmentCounts JudgeSample(const Sample &sample, const RasterImage &image,
                            const Palette &palette, double margin) {
  std::vector<DetectedObject> scene;
  try {
    scene = DetectScene(image, palette);
  } catch (const EmptyScene &) {
  } catch (const UnknownColor &) {
  }
  AlignmentCounts counts;
  counts.samples = 1;
  for (const Query &q : QueriesFor(sample.reference)) {
    bool yes = !scene.empty() && AnswerQuery(scene, q, margin) == Answer::kYes;
    switch (q.kind) {
      case QueryKind::kSpatial:
        ++counts.spatial_total;
        counts.spatial_yes += yes;
        break;
      case QueryKind::kColor:
        ++counts.color_total;
        counts.color_yes += yes;
        break;
      case QueryKind::kShape:
        ++counts.shape_total;
        counts.shape_yes += yes;
        break;
    }
  }
  return counts;
}

AlignmentCounts EvaluateAlignment(std::span<const Sample> samples,
                                  std::span<const RasterImage> images,
                                  const Palette &palette, double margin) {
  if (samples.size() != images.size()) {
    throw CountMismatch(std::to_string(samples.size()) + " samples but " +
                        std::to_string(images.size()) + " images");
  }
  AlignmentCounts total;
  for (size_t i = 0; i < samples.size(); ++i) {
    total += JudgeSample(samples[i], images[i], palette, margin);
  }
  return total;
}

AlignmentReport MakeReport(const std::vector<AlignmentCounts> &per_seed) {
  if (per_seed.empty()) throw EmptyInput("no per-seed alignment counts");
  std::vector<double> spatial, color, shape;
  for (const AlignmentCounts &c : per_seed) {
    spatial.push_back(c.Spatial());
    color.push_back(c.ColorRate());
    shape.push_back(c.ShapeRate());
  }
  AlignmentReport report;
  report.spatial = AggregateSeeds(spatial);
  report.color = AggregateSeeds(color);
  report.shape = AggregateSeeds(shape);
  report.n = per_seed.front().samples;
  return report;
}

ordered_json MetricToJson(const MetricValue &value) {
  ordered_json json;
  json["mean"] = value.mean;
  json["std"] = value.std;
  json["per_seed"] = value.per_seed;
  json["formatted"] = value.Format();
  return json;
}

ordered_json ReportToJson(const AlignmentReport &report) {
  ordered_json json;
  json["spatial"] = MetricToJson(report.spatial);
  json["color"] = MetricToJson(report.color);
  json["shape"] = MetricToJson(report.shape);
  json["n"] = report.n;
  return json;
}

}  // namespace structprompt
