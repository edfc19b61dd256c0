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

#ifndef STRUCTPROMPT_ERRORS_H_
#define STRUCTPROMPT_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace structprompt {

// Base class for every error raised by the library. Callers that only need
// to report a failure can catch this type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A StructuredInfo value broke one or more tuple invariants.
class InvalidStructuredInfo : public Error {
 public:
  explicit InvalidStructuredInfo(std::vector<std::string> violations);
  const std::vector<std::string> &violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Text did not conform to the canonical serialization grammar.
class SerializationSyntaxError : public Error {
 public:
  SerializationSyntaxError(const std::string &message, size_t offset);
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

class UnknownRelationPhrase : public Error {
 public:
  using Error::Error;
};

class VocabularyExhausted : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A JSONL record violated the sample schema. Line numbers are 1-based.
class SchemaError : public Error {
 public:
  SchemaError(const std::string &message, size_t line);
  size_t line() const { return line_; }

 private:
  size_t line_;
};

class UnplacedObject : public Error {
 public:
  using Error::Error;
};

class InconsistentRelations : public Error {
 public:
  using Error::Error;
};

class Unsatisfiable : public Error {
 public:
  using Error::Error;
};

class MalformedPPM : public Error {
 public:
  MalformedPPM(const std::string &message, size_t offset);
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

class UnknownColor : public Error {
 public:
  using Error::Error;
};

class EmptyScene : public Error {
 public:
  using Error::Error;
};

class CountMismatch : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class DegenerateRow : public Error {
 public:
  using Error::Error;
};

// Wraps a module error with the pipeline stage it was raised in.
class PipelineError : public Error {
 public:
  PipelineError(const std::string &stage, const std::string &message);
  const std::string &stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace structprompt

#endif  // STRUCTPROMPT_ERRORS_H_
