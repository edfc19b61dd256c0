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

#include "structprompt/tuple.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <tuple>

#include "structprompt/errors.h"

namespace structprompt {
namespace {

std::string Lower(std::string_view text) {
  std::string out(text);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool KnownColor(Color color) {
  return std::find(kAllColors.begin(), kAllColors.end(), color) != kAllColors.end();
}
bool KnownShape(Shape shape) {
  return std::find(kAllShapes.begin(), kAllShapes.end(), shape) != kAllShapes.end();
}
bool KnownRelation(Relation relation) {
  return std::find(kAllRelations.begin(), kAllRelations.end(), relation) !=
         kAllRelations.end();
}

std::string FormatRelation(const RelationTuple &r) {
  std::string token = KnownRelation(r.relation)
                          ? std::string(RelationToken(r.relation))
                          : "?";
  return "(" + std::to_string(r.subject_id) + ", " + token + ", " +
         std::to_string(r.object_id) + ")";
}

// Recursive-descent reader over the canonical grammar. Every failure reports
// the byte offset where the expected text did not appear.
class SerializedReader {
 public:
  explicit SerializedReader(std::string_view text) : text_(text) {}

  StructuredInfo Read() {
    StructuredInfo info;
    Expect("Objects: ");
    do {
      info.objects.push_back(ReadObject());
    } while (Accept(", "));
    Expect(". Relations: [");
    if (!Accept("]")) {
      do {
        info.relations.push_back(ReadRelation());
      } while (Accept(", "));
      Expect("]");
    }
    Expect(".");
    if (pos_ != text_.size()) Fail("trailing characters");
    return info;
  }

 private:
  [[noreturn]] void Fail(const std::string &message) const {
    throw SerializationSyntaxError(message, pos_);
  }

  bool Accept(std::string_view literal) {
    if (text_.substr(pos_, literal.size()) != literal) return false;
    pos_ += literal.size();
    return true;
  }

  void Expect(std::string_view literal) {
    if (!Accept(literal)) Fail("expected '" + std::string(literal) + "'");
  }

  int ReadInt() {
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) Fail("expected an integer");
    if (text_[start] == '0') {
      pos_ = start;
      Fail("integer with leading zero");
    }
    int value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc()) {
      pos_ = start;
      Fail("integer out of range");
    }
    return value;
  }

  // Reads up to (not including) the next character in `stops`.
  std::string_view ReadWord(std::string_view stops) {
    size_t start = pos_;
    while (pos_ < text_.size() && stops.find(text_[pos_]) == std::string_view::npos) {
      ++pos_;
    }
    if (start == pos_) Fail("expected a word");
    return text_.substr(start, pos_ - start);
  }

  ObjectTuple ReadObject() {
    ObjectTuple object;
    Expect("[");
    object.id = ReadInt();
    Expect(": (");
    size_t at = pos_;
    auto color = ColorFromName(ReadWord(",)"));
    if (!color) {
      pos_ = at;
      Fail("unknown color");
    }
    object.color = *color;
    Expect(", ");
    at = pos_;
    auto shape = ShapeFromName(ReadWord(",)"));
    if (!shape) {
      pos_ = at;
      Fail("unknown shape");
    }
    object.shape = *shape;
    if (Accept(", ")) {
      at = pos_;
      if (Lower(ReadWord(",)")) != AnchorName(Anchor::kCenter)) {
        pos_ = at;
        Fail("unknown anchor");
      }
      object.anchor = Anchor::kCenter;
    }
    Expect(")]");
    return object;
  }

  RelationTuple ReadRelation() {
    RelationTuple relation;
    Expect("(");
    relation.subject_id = ReadInt();
    Expect(", ");
    size_t at = pos_;
    auto name = RelationFromWords(ReadWord(",)"));
    if (!name) {
      pos_ = at;
      Fail("unknown relation");
    }
    relation.relation = *name;
    Expect(", ");
    relation.object_id = ReadInt();
    Expect(")");
    return relation;
  }

  std::string_view text_;
  size_t pos_ = 0;
};

}  // namespace

std::string_view ColorName(Color color) {
  switch (color) {
    case Color::kRed: return "red";
    case Color::kGreen: return "green";
    case Color::kBlue: return "blue";
    case Color::kYellow: return "yellow";
    case Color::kPurple: return "purple";
    case Color::kBrown: return "brown";
    case Color::kGray: return "gray";
    case Color::kCyan: return "cyan";
  }
  return "?";
}

std::string_view ShapeName(Shape shape) {
  switch (shape) {
    case Shape::kCube: return "cube";
    case Shape::kSphere: return "sphere";
    case Shape::kTriangle: return "triangle";
  }
  return "?";
}

std::string_view AnchorName(Anchor anchor) {
  switch (anchor) {
    case Anchor::kCenter: return "center";
  }
  return "?";
}

std::string_view RelationToken(Relation relation) {
  switch (relation) {
    case Relation::kLeftOf: return "left_of";
    case Relation::kRightOf: return "right_of";
    case Relation::kAbove: return "above";
    case Relation::kBelow: return "below";
    case Relation::kInFrontOf: return "in_front_of";
    case Relation::kBehind: return "behind";
    case Relation::kFrontLeftOf: return "front_left_of";
    case Relation::kFrontRightOf: return "front_right_of";
    case Relation::kBehindLeftOf: return "behind_left_of";
    case Relation::kBehindRightOf: return "behind_right_of";
  }
  return "?";
}

std::string RelationWords(Relation relation) {
  std::string words(RelationToken(relation));
  std::replace(words.begin(), words.end(), '_', ' ');
  return words;
}

std::optional<Color> ColorFromName(std::string_view name) {
  std::string lower = Lower(name);
  for (Color c : kAllColors) {
    if (ColorName(c) == lower) return c;
  }
  return std::nullopt;
}

std::optional<Shape> ShapeFromName(std::string_view name) {
  std::string lower = Lower(name);
  for (Shape s : kAllShapes) {
    if (ShapeName(s) == lower) return s;
  }
  return std::nullopt;
}

std::optional<Relation> RelationFromToken(std::string_view token) {
  std::string lower = Lower(token);
  for (Relation r : kAllRelations) {
    if (RelationToken(r) == lower) return r;
  }
  return std::nullopt;
}

std::optional<Relation> RelationFromWords(std::string_view words) {
  std::string lower = Lower(words);
  for (Relation r : kAllRelations) {
    if (RelationWords(r) == lower) return r;
  }
  return std::nullopt;
}

Relation Inverse(Relation relation) {
  switch (relation) {
    case Relation::kLeftOf: return Relation::kRightOf;
    case Relation::kRightOf: return Relation::kLeftOf;
    case Relation::kAbove: return Relation::kBelow;
    case Relation::kBelow: return Relation::kAbove;
    case Relation::kInFrontOf: return Relation::kBehind;
    case Relation::kBehind: return Relation::kInFrontOf;
    case Relation::kFrontLeftOf: return Relation::kBehindRightOf;
    case Relation::kFrontRightOf: return Relation::kBehindLeftOf;
    case Relation::kBehindLeftOf: return Relation::kFrontRightOf;
    case Relation::kBehindRightOf: return Relation::kFrontLeftOf;
  }
  return relation;
}

RelationTuple Inverse(const RelationTuple &tuple) {
  return {tuple.object_id, Inverse(tuple.relation), tuple.subject_id};
}

const ObjectTuple *StructuredInfo::Find(int id) const {
  for (const ObjectTuple &object : objects) {
    if (object.id == id) return &object;
  }
  return nullptr;
}

Prompt::Prompt(std::string_view text) {
  size_t begin = 0;
  size_t end = text.size();
  while (begin < end && IsSpace(text[begin])) ++begin;
  while (end > begin && IsSpace(text[end - 1])) --end;
  if (begin == end) throw Error("prompt text is empty");
  text_ = std::string(text.substr(begin, end - begin));
}

std::vector<std::string> Validate(const StructuredInfo &info) {
  std::vector<std::string> violations;
  if (info.objects.empty()) violations.push_back("objects list is empty");

  std::set<int> ids;
  int anchored = 0;
  bool in_order = true;
  for (size_t i = 0; i < info.objects.size(); ++i) {
    const ObjectTuple &object = info.objects[i];
    if (object.id <= 0) {
      violations.push_back("object id " + std::to_string(object.id) +
                           " is not positive");
    }
    if (!ids.insert(object.id).second) {
      violations.push_back("duplicate object id " + std::to_string(object.id));
    }
    if (object.id != static_cast<int>(i) + 1) in_order = false;
    if (!KnownColor(object.color)) {
      violations.push_back("unknown color token in object " +
                           std::to_string(object.id));
    }
    if (!KnownShape(object.shape)) {
      violations.push_back("unknown shape token in object " +
                           std::to_string(object.id));
    }
    if (object.anchor) {
      if (*object.anchor != Anchor::kCenter) {
        violations.push_back("unknown anchor token in object " +
                             std::to_string(object.id));
      }
      ++anchored;
    }
  }
  const int n = static_cast<int>(info.objects.size());
  bool contiguous = static_cast<int>(ids.size()) == n &&
                    (ids.empty() || (*ids.begin() == 1 && *ids.rbegin() == n));
  if (!contiguous) {
    violations.push_back("non-contiguous object ids (expected 1.." +
                         std::to_string(n) + ")");
  } else if (!in_order) {
    violations.push_back("object ids are not in mention order");
  }
  if (anchored > 1) {
    violations.push_back("more than one object anchored at center");
  }

  std::set<std::tuple<int, int, int>> seen;
  for (const RelationTuple &r : info.relations) {
    if (!KnownRelation(r.relation)) {
      violations.push_back("unknown relation token in " + FormatRelation(r));
    }
    if (r.subject_id == r.object_id) {
      violations.push_back("self-relation " + FormatRelation(r));
    }
    if (!ids.count(r.subject_id)) {
      violations.push_back("dangling subject_id " + std::to_string(r.subject_id) +
                           " in " + FormatRelation(r));
    }
    if (!ids.count(r.object_id)) {
      violations.push_back("dangling object_id " + std::to_string(r.object_id) +
                           " in " + FormatRelation(r));
    }
    auto key = std::make_tuple(r.subject_id, static_cast<int>(r.relation), r.object_id);
    if (!seen.insert(key).second) {
      violations.push_back("duplicate relation " + FormatRelation(r));
    }
  }
  return violations;
}

std::string Serialize(const StructuredInfo &info) {
  if (auto violations = Validate(info); !violations.empty()) {
    throw InvalidStructuredInfo(std::move(violations));
  }
  std::string out = "Objects: ";
  for (size_t i = 0; i < info.objects.size(); ++i) {
    const ObjectTuple &object = info.objects[i];
    if (i > 0) out += ", ";
    out += "[" + std::to_string(object.id) + ": (";
    out += ColorName(object.color);
    out += ", ";
    out += ShapeName(object.shape);
    if (object.anchor) {
      out += ", ";
      out += AnchorName(*object.anchor);
    }
    out += ")]";
  }
  out += ". Relations: [";
  for (size_t i = 0; i < info.relations.size(); ++i) {
    const RelationTuple &r = info.relations[i];
    if (i > 0) out += ", ";
    out += "(" + std::to_string(r.subject_id) + ", " + RelationWords(r.relation) +
           ", " + std::to_string(r.object_id) + ")";
  }
  out += "].";
  return out;
}

StructuredInfo ParseSerialized(std::string_view text) {
  StructuredInfo info = SerializedReader(text).Read();
  if (auto violations = Validate(info); !violations.empty()) {
    throw InvalidStructuredInfo(std::move(violations));
  }
  return info;
}

AugmentedPrompt Augment(const Prompt &plain, const StructuredInfo &info) {
  std::string structured = Serialize(info);
  std::string combined = plain.text();
  combined += kAugmentSeparator;
  combined += structured;
  return AugmentedPrompt{plain, std::move(structured), std::move(combined)};
}

}  // namespace structprompt
