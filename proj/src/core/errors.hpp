// Copyright 2026 The BiVert Authors.
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

#ifndef BIVERT_CORE_ERRORS_HPP
#define BIVERT_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bivert {

// Failure classes. The C API maps each kind onto a status code, and the CLI
// maps status codes onto process exit codes.
enum class ErrorKind {
  kInvalidArgument,
  kMissingResource,
  kParse,
  kSchema,
  kMissingLabel,
  kNotFound,
  kDegenerateSentence,
  kZeroVector,
  kDegree,
  kUndefinedCorrelation,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Errors optionally tied to a line of an input file. Line numbers are
// 1-based; 0 means the error has no file position.
class LineError : public Error {
 public:
  LineError(ErrorKind kind, std::size_t line, const std::string& what)
      : Error(kind, line == 0 ? what
                              : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ParseError : public LineError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : LineError(ErrorKind::kParse, line, what) {}
};

class SchemaError : public LineError {
 public:
  SchemaError(std::size_t line, const std::string& what)
      : LineError(ErrorKind::kSchema, line, what) {}
  explicit SchemaError(const std::string& what)
      : LineError(ErrorKind::kSchema, 0, what) {}
};

}  // namespace bivert

#endif  // BIVERT_CORE_ERRORS_HPP
