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

#include "structprompt/parser.h"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace structprompt {
namespace {

constexpr size_t kMaxObjects = 2;

struct Token {
  std::string word;  // lowercase
  size_t begin = 0;
  size_t end = 0;
};

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word) {
    for (char &c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    words.push_back(word);
  }
  return words;
}

bool IsSeparator(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0 || c == ',';
}

std::vector<Token> Tokenize(std::string_view text, size_t begin, size_t end) {
  std::vector<Token> tokens;
  size_t i = begin;
  while (i < end) {
    while (i < end && IsSeparator(text[i])) ++i;
    if (i >= end) break;
    size_t start = i;
    while (i < end && !IsSeparator(text[i])) ++i;
    Token token;
    token.begin = start;
    token.end = i;
    for (size_t k = start; k < i; ++k) {
      token.word += static_cast<char>(std::tolower(static_cast<unsigned char>(text[k])));
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

// A syntactic reference: "it" or "the <color> <shape>".
struct RefSyntax {
  bool pronoun = false;
  Color color = Color::kRed;
  Shape shape = Shape::kCube;
  size_t first = 0;  // token indices [first, last)
  size_t last = 0;
};

std::optional<RefSyntax> MatchRef(const std::vector<Token> &tokens, size_t pos) {
  if (pos < tokens.size() && tokens[pos].word == "it") {
    return RefSyntax{true, Color::kRed, Shape::kCube, pos, pos + 1};
  }
  if (pos + 2 < tokens.size() && tokens[pos].word == "the") {
    auto color = ColorFromName(tokens[pos + 1].word);
    auto shape = ShapeFromName(tokens[pos + 2].word);
    if (color && shape) return RefSyntax{false, *color, *shape, pos, pos + 3};
  }
  return std::nullopt;
}

// Matches `words` starting at token `pos`; returns the index past the match.
std::optional<size_t> MatchWords(const std::vector<Token> &tokens, size_t pos,
                                 const std::vector<std::string> &words) {
  if (pos + words.size() > tokens.size()) return std::nullopt;
  for (size_t i = 0; i < words.size(); ++i) {
    if (tokens[pos + i].word != words[i]) return std::nullopt;
  }
  return pos + words.size();
}

struct RelationMatch {
  Relation relation;
  RefSyntax ref;
};

// Matches "<prefix> <ref> <suffix>" so that it consumes tokens [pos, end).
std::optional<RelationMatch> MatchRelation(const PromptGrammar &grammar,
                                           const std::vector<Token> &tokens,
                                           size_t pos) {
  for (const RelationPhrase &phrase : grammar.phrases()) {
    auto after_prefix = MatchWords(tokens, pos, SplitWords(phrase.prefix));
    if (!after_prefix) continue;
    auto ref = MatchRef(tokens, *after_prefix);
    if (!ref) continue;
    auto after_suffix = MatchWords(tokens, ref->last, SplitWords(phrase.suffix));
    if (!after_suffix || *after_suffix != tokens.size()) continue;
    return RelationMatch{phrase.relation, *ref};
  }
  return std::nullopt;
}

class ClauseParser {
 public:
  ClauseParser(const PromptGrammar &grammar, StructuredInfo *info,
               std::vector<ParseDiagnostic> *diagnostics)
      : grammar_(grammar), info_(info), diagnostics_(diagnostics) {}

  void Parse(size_t clause_index, const std::vector<Token> &tokens) {
    clause_ = clause_index;
    tokens_ = &tokens;
    const std::string &head = tokens[0].word;
    if (std::find(grammar_.verbs().begin(), grammar_.verbs().end(), head) !=
        grammar_.verbs().end()) {
      ParseIntroduction();
    } else if (head == "it" || head == "the") {
      ParseAssertion();
    } else {
      ReportUnknownOrMismatch("clause must start with a verb, 'it' or 'the'");
    }
  }

 private:
  const std::vector<Token> &tokens() const { return *tokens_; }

  void Report(size_t first, size_t last, DiagnosticCategory category,
              std::string message) {
    const auto &t = tokens();
    ParseDiagnostic d;
    d.clause_index = clause_;
    d.begin = t[first].begin;
    d.end = t[std::max(first + 1, last) - 1].end;
    d.message = std::move(message);
    d.category = category;
    diagnostics_->push_back(std::move(d));
  }

  // Prefers pointing at a word outside the lexicon; otherwise flags the
  // whole clause as matching no template.
  void ReportUnknownOrMismatch(const std::string &message) {
    const auto &t = tokens();
    for (size_t i = 0; i < t.size(); ++i) {
      if (!grammar_.IsKnownWord(t[i].word)) {
        Report(i, i + 1, DiagnosticCategory::kUnknownWord,
               "unknown word '" + t[i].word + "'");
        return;
      }
    }
    Report(0, t.size(), DiagnosticCategory::kTemplateMismatch, message);
  }

  std::optional<int> Resolve(const RefSyntax &ref) {
    const auto &objects = info_->objects;
    if (ref.pronoun) {
      if (objects.empty()) {
        Report(ref.first, ref.last, DiagnosticCategory::kUnresolvedReference,
               "'it' has no antecedent");
        return std::nullopt;
      }
      return objects.back().id;
    }
    std::string description = std::string(ColorName(ref.color)) + " " +
                              std::string(ShapeName(ref.shape));
    std::optional<int> found;
    int matches = 0;
    for (const ObjectTuple &object : objects) {
      if (object.color == ref.color && object.shape == ref.shape) {
        found = object.id;
        ++matches;
      }
    }
    if (matches == 0) {
      Report(ref.first, ref.last, DiagnosticCategory::kUnresolvedReference,
             "no earlier " + description);
      return std::nullopt;
    }
    if (matches > 1) {
      Report(ref.first, ref.last, DiagnosticCategory::kUnresolvedReference,
             "ambiguous reference to the " + description);
      return std::nullopt;
    }
    return found;
  }

  bool AddRelation(const RelationTuple &relation) {
    if (relation.subject_id == relation.object_id) {
      Report(0, tokens().size(), DiagnosticCategory::kTemplateMismatch,
             "object related to itself");
      return false;
    }
    auto &relations = info_->relations;
    if (std::find(relations.begin(), relations.end(), relation) != relations.end()) {
      Report(0, tokens().size(), DiagnosticCategory::kTemplateMismatch,
             "duplicate relation");
      return false;
    }
    relations.push_back(relation);
    return true;
  }

  void ParseIntroduction() {
    const auto &t = tokens();
    if (t.size() < 4 || t[1].word != "a") {
      ReportUnknownOrMismatch("expected '<verb> a <color> <shape> ...'");
      return;
    }
    auto color = ColorFromName(t[2].word);
    if (!color) {
      Report(2, 3, DiagnosticCategory::kUnknownWord,
             "expected a color, got '" + t[2].word + "'");
      return;
    }
    auto shape = ShapeFromName(t[3].word);
    if (!shape) {
      Report(3, 4, DiagnosticCategory::kUnknownWord,
             "expected a shape, got '" + t[3].word + "'");
      return;
    }
    if (info_->objects.size() >= kMaxObjects) {
      Report(0, t.size(), DiagnosticCategory::kTemplateMismatch,
             "at most " + std::to_string(kMaxObjects) + " objects per prompt");
      return;
    }

    ObjectTuple object;
    object.id = static_cast<int>(info_->objects.size()) + 1;
    object.color = *color;
    object.shape = *shape;

    if (t.size() == 4) {
      info_->objects.push_back(object);
      return;
    }
    if (MatchWords(t, 4, {"at", "the", "center"}) == t.size()) {
      for (const ObjectTuple &other : info_->objects) {
        if (other.anchor) {
          Report(4, t.size(), DiagnosticCategory::kTemplateMismatch,
                 "only one object may be at the center");
          return;
        }
      }
      object.anchor = Anchor::kCenter;
      info_->objects.push_back(object);
      return;
    }
    auto match = MatchRelation(grammar_, t, 4);
    if (!match) {
      ReportUnknownOrMismatch("unrecognized relation phrase");
      return;
    }
    // The reference is resolved before the new object exists, so "it" names
    // the previous object.
    auto target = Resolve(match->ref);
    if (!target) return;
    info_->objects.push_back(object);
    if (!AddRelation({object.id, match->relation, *target})) {
      info_->objects.pop_back();
    }
  }

  void ParseAssertion() {
    const auto &t = tokens();
    auto subject = MatchRef(t, 0);
    if (!subject || subject->last >= t.size() || t[subject->last].word != "is") {
      ReportUnknownOrMismatch("expected '<ref> is <relation> <ref>'");
      return;
    }
    auto match = MatchRelation(grammar_, t, subject->last + 1);
    if (!match) {
      ReportUnknownOrMismatch("unrecognized relation phrase");
      return;
    }
    auto subject_id = Resolve(*subject);
    auto object_id = Resolve(match->ref);
    if (!subject_id || !object_id) return;
    AddRelation({*subject_id, match->relation, *object_id});
  }

  const PromptGrammar &grammar_;
  StructuredInfo *info_;
  std::vector<ParseDiagnostic> *diagnostics_;
  size_t clause_ = 0;
  const std::vector<Token> *tokens_ = nullptr;
};

std::string NormalizePhrase(std::string_view words) {
  std::string out;
  for (const std::string &w : SplitWords(words)) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string DescribeDiagnostics(const std::vector<ParseDiagnostic> &diagnostics) {
  std::string out = "cannot parse prompt";
  for (const ParseDiagnostic &d : diagnostics) {
    out += "\n  clause " + std::to_string(d.clause_index) + " [" +
           std::to_string(d.begin) + ", " + std::to_string(d.end) + ") " +
           std::string(DiagnosticCategoryName(d.category)) + ": " + d.message;
  }
  return out;
}

}  // namespace

std::string_view DiagnosticCategoryName(DiagnosticCategory category) {
  switch (category) {
    case DiagnosticCategory::kUnknownWord: return "unknown-word";
    case DiagnosticCategory::kUnresolvedReference: return "unresolved-reference";
    case DiagnosticCategory::kTemplateMismatch: return "template-mismatch";
  }
  return "?";
}

ParseError::ParseError(std::vector<ParseDiagnostic> diagnostics)
    : Error(DescribeDiagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

PromptGrammar::PromptGrammar() {
  using R = Relation;
  phrases_ = {
      {"on the right of", "", R::kRightOf},
      {"to the right of", "", R::kRightOf},
      {"right of", "", R::kRightOf},
      {"on the left of", "", R::kLeftOf},
      {"to the left of", "", R::kLeftOf},
      {"left of", "", R::kLeftOf},
      {"above", "", R::kAbove},
      {"on top of", "", R::kAbove},
      {"below", "", R::kBelow},
      {"under", "", R::kBelow},
      {"in front of", "", R::kInFrontOf},
      {"behind", "", R::kBehind},
      {"in front of", "on the right", R::kFrontRightOf},
      {"in front of", "on the left", R::kFrontLeftOf},
      {"behind", "on the right", R::kBehindRightOf},
      {"behind", "on the left", R::kBehindLeftOf},
      {"front right of", "", R::kFrontRightOf},
      {"front left of", "", R::kFrontLeftOf},
      {"behind right of", "", R::kBehindRightOf},
      {"behind left of", "", R::kBehindLeftOf},
      {"to the front right of", "", R::kFrontRightOf},
      {"to the front left of", "", R::kFrontLeftOf},
      {"to the back right of", "", R::kBehindRightOf},
      {"to the back left of", "", R::kBehindLeftOf},
  };
  std::stable_sort(phrases_.begin(), phrases_.end(),
                   [](const RelationPhrase &a, const RelationPhrase &b) {
                     return SplitWords(a.prefix).size() + SplitWords(a.suffix).size() >
                            SplitWords(b.prefix).size() + SplitWords(b.suffix).size();
                   });
  verbs_ = {"add", "place", "put"};

  known_words_ = verbs_;
  for (const char *w : {"a", "at", "the", "center", "it", "is"}) known_words_.push_back(w);
  for (Color c : kAllColors) known_words_.emplace_back(ColorName(c));
  for (Shape s : kAllShapes) known_words_.emplace_back(ShapeName(s));
  for (const RelationPhrase &p : phrases_) {
    for (auto &w : SplitWords(p.prefix)) known_words_.push_back(w);
    for (auto &w : SplitWords(p.suffix)) known_words_.push_back(w);
  }
  std::sort(known_words_.begin(), known_words_.end());
  known_words_.erase(std::unique(known_words_.begin(), known_words_.end()),
                     known_words_.end());
}

const PromptGrammar &PromptGrammar::Default() {
  static const PromptGrammar grammar;
  return grammar;
}

bool PromptGrammar::IsKnownWord(std::string_view word) const {
  return std::binary_search(known_words_.begin(), known_words_.end(), word);
}

Relation RelationPhraseToRelation(std::string_view words) {
  std::string normalized = NormalizePhrase(words);
  std::string prefix = normalized;
  std::string suffix;
  if (size_t gap = normalized.find("..."); gap != std::string::npos) {
    prefix = NormalizePhrase(normalized.substr(0, gap));
    suffix = NormalizePhrase(normalized.substr(gap + 3));
  }
  for (const RelationPhrase &phrase : PromptGrammar::Default().phrases()) {
    if (phrase.prefix == prefix && phrase.suffix == suffix) return phrase.relation;
  }
  throw UnknownRelationPhrase("unknown relation phrase '" + std::string(words) + "'");
}

StructuredInfo ParsePrompt(const Prompt &prompt) {
  const std::string &text = prompt.text();
  const PromptGrammar &grammar = PromptGrammar::Default();
  StructuredInfo info;
  std::vector<ParseDiagnostic> diagnostics;
  ClauseParser parser(grammar, &info, &diagnostics);

  size_t clause_index = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t stop = text.find('.', start);
    if (stop == std::string::npos) stop = text.size();
    std::vector<Token> tokens = Tokenize(text, start, stop);
    if (!tokens.empty()) parser.Parse(clause_index++, tokens);
    start = stop + 1;
  }

  if (diagnostics.empty() && info.objects.empty()) {
    diagnostics.push_back({0, 0, text.size(), "prompt introduces no objects",
                           DiagnosticCategory::kTemplateMismatch});
  }
  if (!diagnostics.empty()) throw ParseError(std::move(diagnostics));
  return info;
}

}  // namespace structprompt
