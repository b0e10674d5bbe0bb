// Copyright 2026 The ftperc Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ftperc {

/// Raised by the circuit text parser. Line and column are 1-based.
class ParseError : public std::runtime_error {
   public:
    ParseError(const std::string &message, std::size_t line, std::size_t column)
        : std::runtime_error(
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line),
          column_(column),
          message_(message) {
    }

    std::size_t line() const noexcept {
        return line_;
    }
    std::size_t column() const noexcept {
        return column_;
    }
    const std::string &message() const noexcept {
        return message_;
    }

   private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

/// The inputs were well formed but the requested analysis has no answer
/// (degenerate map, supercritical density, threshold not bracketed, ...).
class AnalysisError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace ftperc
