// Copyright 2026 The ringret Authors.
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

#ifndef RINGRET_ERRORS_HPP_
#define RINGRET_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace ringret {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (empty input, k > n, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Matrix/vector dimensions disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Text input could not be parsed. Carries the 1-based line number when known
// and, once attached, the file name: "file:line: message".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::string file = {})
      : Error(format(what, line, file)),
        detail_(what),
        line_(line),
        file_(std::move(file)) {}
  std::size_t line() const { return line_; }
  const std::string& file() const { return file_; }
  const std::string& detail() const { return detail_; }
  ParseError in_file(std::string file) const {
    return ParseError(detail_, line_, std::move(file));
  }

 private:
  static std::string format(const std::string& what, std::size_t line,
                            const std::string& file) {
    std::string prefix = file;
    if (line > 0) {
      prefix += (file.empty() ? "line " : ":") + std::to_string(line);
    }
    return prefix.empty() ? what : prefix + ": " + what;
  }

  std::string detail_;
  std::size_t line_;
  std::string file_;
};

// Binary or structured file is malformed.
class FormatError : public Error {
 public:
  enum class Kind { kBadMagic, kTruncated, kDuplicateId, kMalformed };

  FormatError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// NaN/Inf or divergence during numerical work.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace ringret

#endif  // RINGRET_ERRORS_HPP_
