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

#include "structprompt/errors.h"

#include <utility>

namespace structprompt {
namespace {

std::string JoinViolations(const std::vector<std::string> &violations) {
  std::string out = "invalid structured info";
  for (size_t i = 0; i < violations.size(); ++i) {
    out += i == 0 ? ": " : "; ";
    out += violations[i];
  }
  return out;
}

}  // namespace

InvalidStructuredInfo::InvalidStructuredInfo(std::vector<std::string> violations)
    : Error(JoinViolations(violations)), violations_(std::move(violations)) {}

SerializationSyntaxError::SerializationSyntaxError(const std::string &message,
                                                   size_t offset)
    : Error(message + " at byte " + std::to_string(offset)), offset_(offset) {}

SchemaError::SchemaError(const std::string &message, size_t line)
    : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

MalformedPPM::MalformedPPM(const std::string &message, size_t offset)
    : Error("malformed PPM: " + message + " at byte " + std::to_string(offset)),
      offset_(offset) {}

PipelineError::PipelineError(const std::string &stage,
                             const std::string &message)
    : Error("[" + stage + "] " + message), stage_(stage) {}

}  // namespace structprompt
