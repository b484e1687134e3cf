/* Copyright 2026 The amralign Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef AMRALIGN_ERRORS_H_
#define AMRALIGN_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace amralign {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed Penman input. Carries a 1-based line/column of the offending
// character.
class ParseError : public Error {
 public:
  enum class Kind { kSyntax, kUnbalanced, kDuplicateVariable, kDanglingReference };

  ParseError(Kind kind, int line, int column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        kind_(kind), line_(line), column_(column) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

// Graph that violates a structural invariant (missing root, unknown source,
// unreachable node...).
class GraphError : public Error {
 public:
  using Error::Error;
};

// Token streams that cannot be reconciled with each other. `offset` is the
// index of the offending token in the stream being mapped.
class TokenMismatchError : public Error {
 public:
  TokenMismatchError(std::size_t offset, const std::string& what)
      : Error("token " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Score matrix or container contents failing validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Alignment document syntax errors; `line` is 1-based (0 when unknown).
class FormatError : public Error {
 public:
  FormatError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Numerically undefined quantity (constant vector in a correlation, no
// supervised rows in a loss...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace amralign

#endif  // AMRALIGN_ERRORS_H_
