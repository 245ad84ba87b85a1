// Copyright 2026 The cshe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CSHE_ERRORS_HPP
#define CSHE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cshe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument value (negative key-space size, eps outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operands whose dimensions, cutoffs or mode counts do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// The request is well formed but exceeds what the simulator will do
/// (dense operator too large, nonlinear gate on too many modes, ...).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Decoding is impossible: the two logical codewords coincide or the
/// state has no weight on either of them.
class UndecodableError : public Error {
 public:
  using Error::Error;
};

/// Malformed message or circuit document. Line and column are 1-based;
/// zero means the position is unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace cshe

#endif  // CSHE_ERRORS_HPP
