// Copyright 2026 The Thurstone Authors.
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

#ifndef THURSTONE_ERRORS_H_
#define THURSTONE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace thurstone {

// Bad input: malformed files, violated preconditions, invalid parameters.
// The CLI maps this family to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what)
      : std::invalid_argument(what) {}
};

// A row of an input file could not be parsed. `line` is 1-based.
class ParseError : public ValidationError {
 public:
  ParseError(int line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A quantity requested for a model or form where it is not defined.
class UnsupportedError : public ValidationError {
 public:
  explicit UnsupportedError(const std::string& what) : ValidationError(what) {}
};

// The comparison graph is not connected; `partition` holds one side of a
// separating cut (item indices).
class DisconnectedError : public ValidationError {
 public:
  DisconnectedError(const std::string& what, std::vector<int> partition)
      : ValidationError(what), partition_(std::move(partition)) {}
  const std::vector<int>& partition() const { return partition_; }

 private:
  std::vector<int> partition_;
};

// Numerical failure (quadrature or eigensolver). Exit code 3 in the CLI.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double achieved = 0.0)
      : std::runtime_error(what), achieved_(achieved) {}
  // Error estimate reached before giving up, when meaningful.
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

}  // namespace thurstone

#endif  // THURSTONE_ERRORS_H_
