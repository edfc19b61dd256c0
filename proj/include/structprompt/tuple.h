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

#ifndef STRUCTPROMPT_TUPLE_H_
#define STRUCTPROMPT_TUPLE_H_

// Tuple representation of a scene: object tuples (color, shape) and spatial
// relation tuples (subject id, relation, object id), plus the canonical
// single-line text form that is appended to plain prompts.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace structprompt {

enum class Color { kRed, kGreen, kBlue, kYellow, kPurple, kBrown, kGray, kCyan };
enum class Shape { kCube, kSphere, kTriangle };
enum class Anchor { kCenter };
enum class Relation {
  kLeftOf,
  kRightOf,
  kAbove,
  kBelow,
  kInFrontOf,
  kBehind,
  kFrontLeftOf,
  kFrontRightOf,
  kBehindLeftOf,
  kBehindRightOf,
};

inline constexpr std::array<Color, 8> kAllColors = {
    Color::kRed,    Color::kGreen, Color::kBlue, Color::kYellow,
    Color::kPurple, Color::kBrown, Color::kGray, Color::kCyan};
inline constexpr std::array<Shape, 3> kAllShapes = {
    Shape::kCube, Shape::kSphere, Shape::kTriangle};
inline constexpr std::array<Relation, 10> kAllRelations = {
    Relation::kLeftOf,       Relation::kRightOf,      Relation::kAbove,
    Relation::kBelow,        Relation::kInFrontOf,    Relation::kBehind,
    Relation::kFrontLeftOf,  Relation::kFrontRightOf, Relation::kBehindLeftOf,
    Relation::kBehindRightOf};

// Canonical lowercase names ("red", "cube", "front_right_of", "center").
std::string_view ColorName(Color color);
std::string_view ShapeName(Shape shape);
std::string_view AnchorName(Anchor anchor);
std::string_view RelationToken(Relation relation);
// Relation token with underscores replaced by spaces ("front right of").
std::string RelationWords(Relation relation);

// Case-insensitive lookups; nullopt for words outside the vocabulary.
std::optional<Color> ColorFromName(std::string_view name);
std::optional<Shape> ShapeFromName(std::string_view name);
std::optional<Relation> RelationFromToken(std::string_view token);
std::optional<Relation> RelationFromWords(std::string_view words);

// left_of <-> right_of, above <-> below, in_front_of <-> behind,
// front_left_of <-> behind_right_of, front_right_of <-> behind_left_of.
Relation Inverse(Relation relation);

struct ObjectTuple {
  int id = 0;
  Color color = Color::kRed;
  Shape shape = Shape::kCube;
  std::optional<Anchor> anchor;

  bool operator==(const ObjectTuple &) const = default;
};

struct RelationTuple {
  int subject_id = 0;
  Relation relation = Relation::kLeftOf;
  int object_id = 0;

  bool operator==(const RelationTuple &) const = default;
};

// The relation seen from the object's side: (o, inverse(r), s).
RelationTuple Inverse(const RelationTuple &tuple);

struct StructuredInfo {
  std::vector<ObjectTuple> objects;
  std::vector<RelationTuple> relations;

  bool operator==(const StructuredInfo &) const = default;

  // Returns the object with the given id or nullptr.
  const ObjectTuple *Find(int id) const;
};

// Plain natural-language prompt. The text is stripped of surrounding
// whitespace and must be non-empty.
class Prompt {
 public:
  explicit Prompt(std::string_view text);
  const std::string &text() const { return text_; }
  bool operator==(const Prompt &) const = default;

 private:
  std::string text_;
};

struct AugmentedPrompt {
  Prompt plain;
  std::string structured_text;
  std::string combined;
};

// Text placed between the plain prompt and its serialized tuples.
inline constexpr std::string_view kAugmentSeparator =
    "\nStructured information: ";

// Returns every violated invariant, empty when the value is well formed.
std::vector<std::string> Validate(const StructuredInfo &info);

// Canonical form, e.g.
//   Objects: [1: (purple, cube, center)], [2: (brown, cube)].
//   Relations: [(2, front right of, 1)].
// on a single line. Throws InvalidStructuredInfo.
std::string Serialize(const StructuredInfo &info);

// Inverse of Serialize. Throws SerializationSyntaxError with the byte offset
// of the first offending character, or InvalidStructuredInfo when the text is
// well formed but the tuples are not.
StructuredInfo ParseSerialized(std::string_view text);

// Throws InvalidStructuredInfo.
AugmentedPrompt Augment(const Prompt &plain, const StructuredInfo &info);

}  // namespace structprompt

#endif  // STRUCTPROMPT_TUPLE_H_
