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

#ifndef STRUCTPROMPT_PARSER_H_
#define STRUCTPROMPT_PARSER_H_

// Deterministic grammar that converts spatial prompts such as
//
//   Add a purple cube at the center. Add a brown cube in front of it on the right.
//
// into StructuredInfo. Clauses are split on '.', each clause is matched
// against the templates below, and references are resolved against the
// objects introduced so far:
//
//   <verb> a <color> <shape>
//   <verb> a <color> <shape> at the center
//   <verb> a <color> <shape> <relation phrase> <ref> [<relation suffix>]
//   <ref> is <relation phrase> <ref> [<relation suffix>]
//
// where <verb> is add/place/put and <ref> is "it" (the most recently
// introduced object) or "the <color> <shape>" (the unique earlier object
// with that description).

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "structprompt/errors.h"
#include "structprompt/tuple.h"

namespace structprompt {

enum class DiagnosticCategory { kUnknownWord, kUnresolvedReference, kTemplateMismatch };

std::string_view DiagnosticCategoryName(DiagnosticCategory category);

struct ParseDiagnostic {
  size_t clause_index = 0;
  // Byte span [begin, end) in the prompt text.
  size_t begin = 0;
  size_t end = 0;
  std::string message;
  DiagnosticCategory category = DiagnosticCategory::kTemplateMismatch;

  bool operator==(const ParseDiagnostic &) const = default;
};

class ParseError : public Error {
 public:
  explicit ParseError(std::vector<ParseDiagnostic> diagnostics);
  const std::vector<ParseDiagnostic> &diagnostics() const { return diagnostics_; }

 private:
  std::vector<ParseDiagnostic> diagnostics_;
};

// One surface form of a relation: words before the reference and words after
// it. "in front of <ref> on the right" has prefix "in front of" and suffix
// "on the right"; most forms have an empty suffix.
struct RelationPhrase {
  std::string prefix;
  std::string suffix;
  Relation relation;
};

// The grammar tables. Immutable after construction and shared by all parses.
class PromptGrammar {
 public:
  static const PromptGrammar &Default();

  // Phrases ordered longest first.
  const std::vector<RelationPhrase> &phrases() const { return phrases_; }
  const std::vector<std::string> &verbs() const { return verbs_; }

  // True if `word` (lowercase) appears anywhere in the grammar or lexicon.
  bool IsKnownWord(std::string_view word) const;

 private:
  PromptGrammar();

  std::vector<RelationPhrase> phrases_;
  std::vector<std::string> verbs_;
  std::vector<std::string> known_words_;
};

// Maps a surface phrase to its relation. A composite form is written with
// "..." where the reference goes ("in front of ... on the left"). Matching is
// case-insensitive and whitespace-normalized. Throws UnknownRelationPhrase.
Relation RelationPhraseToRelation(std::string_view words);

// Throws ParseError; never returns a partially parsed value.
StructuredInfo ParsePrompt(const Prompt &prompt);

}  // namespace structprompt

#endif  // STRUCTPROMPT_PARSER_H_
