// Copyright 2026 The Lexiprec Authors
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

#ifndef LEXIPREC_ERROR_HPP_
#define LEXIPREC_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace lexiprec {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data: malformed files, inconsistent judgments, invalid
// parameters to an operation.
class DataError : public Error {
 public:
  using Error::Error;
};

// Malformed line in a run or qrels file. `line()` is 1-based; `source` is
// the file name when known.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, std::string message, std::string source = {})
      : DataError((source.empty() ? std::string() : source + ": ") + "line " +
                  std::to_string(line) + ": " + message),
        line_(line),
        message_(std::move(message)),
        source_(std::move(source)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }
  const std::string& source() const noexcept { return source_; }

 private:
  std::size_t line_;
  std::string message_;
  std::string source_;
};

// A numerical routine failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace lexiprec

#endif  // LEXIPREC_ERROR_HPP_
