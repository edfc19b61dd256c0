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

#ifndef STRUCTPROMPT_LAYOUT_H_
#define STRUCTPROMPT_LAYOUT_H_

// 2D placement of tuple scenes. Image coordinates: x grows rightward, y grows
// downward. Depth is projected onto the vertical axis, so "in front of" means
// lower in the image and "behind" means higher.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "structprompt/tuple.h"

namespace structprompt {

struct Canvas {
  int width = 512;
  int height = 512;
  // Minimum center separation that makes a relation hold.
  int margin = 10;

  bool operator==(const Canvas &) const = default;
};

// Throws Error unless width, height >= 64 and 0 < margin < min(w, h) / 4.
void CheckCanvas(const Canvas &canvas);

struct Placement {
  int object_id = 0;
  int cx = 0;
  int cy = 0;
  // Side of the square bounding box centered on (cx, cy).
  int size = 0;

  bool operator==(const Placement &) const = default;
};

struct Layout {
  Canvas canvas;
  std::vector<Placement> placements;
  StructuredInfo source;

  bool operator==(const Layout &) const = default;

  const Placement *Find(int object_id) const;
};

// Minimum empty pixels between any two bounding boxes produced by the solver
// and the scrambler. Keeps same-colored objects from merging into one
// connected component.
inline constexpr int kMinBoxGap = 2;

// Signed axis components of a relation: dx = +1 when the subject is to the
// right, dy = +1 when the subject is lower (in front), 0 when unconstrained.
struct AxisSigns {
  int dx = 0;
  int dy = 0;
};
AxisSigns RelationAxes(Relation relation);

// Evaluates a relation between two centers.
bool RelationHoldsAt(double subject_x, double subject_y, double object_x,
                     double object_y, Relation relation, double margin);

// Throws UnplacedObject when either id has no placement.
bool RelationHolds(std::span<const Placement> placements, const RelationTuple &tuple,
                   double margin);

// Geometry checks for a layout: one placement per source object, sizes >= 8,
// boxes inside the canvas. Relations are not checked here.
std::vector<std::string> CheckLayoutGeometry(const Layout &layout);

// True when the boxes are at least `gap` pixels apart along some axis.
bool BoxesSeparated(const Placement &a, const Placement &b, int gap);

enum class Axis { kX, kY };

struct Inconsistency {
  Axis axis = Axis::kX;
  // Object ids along the cycle; the first id is repeated at the end.
  std::vector<int> cycle;

  std::string ToString() const;
};

// Detects contradictory ordering constraints on either axis.
std::optional<Inconsistency> CheckConsistency(std::span<const RelationTuple> relations);

// Places every object so that all relations hold with the canvas margin. The
// anchored object, if any, sits at the canvas center. Deterministic for a
// given seed. Throws InvalidStructuredInfo, InconsistentRelations or
// Unsatisfiable.
Layout SolveLayout(const StructuredInfo &info, const Canvas &canvas, uint64_t seed);

// Moves every placement to a uniformly random non-overlapping position,
// ignoring relations and anchors. Sizes and ids are kept. Throws
// Unsatisfiable.
Layout ScrambleLayout(const Layout &layout, uint64_t seed);

// {"canvas": [w, h, margin], "placements": [[id, cx, cy, size], ...],
//  "source": "<serialized tuples>"}
nlohmann::ordered_json LayoutToJson(const Layout &layout);
// Throws Error on malformed input.
Layout LayoutFromJson(const nlohmann::ordered_json &json);

}  // namespace structprompt

#endif  // STRUCTPROMPT_LAYOUT_H_
