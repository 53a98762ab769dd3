// Copyright 2026 The Sememe-SC Authors.
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

#ifndef SEMEME_SC_ERRORS_H_
#define SEMEME_SC_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sememe_sc {

// Malformed or inconsistent input data. Carries the 1-based line number of
// the offending line when the error comes from a text format (0 otherwise).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& message, std::size_t line = 0);

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A caller broke an operation's precondition (empty sememe set, mismatched
// dimensions, unknown token, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite loss or a failed numerical check.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sememe_sc

#endif  // SEMEME_SC_ERRORS_H_
