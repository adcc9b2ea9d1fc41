// Copyright 2026 The QDB Lab Authors
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

#ifndef QDB_ERRORS_H_
#define QDB_ERRORS_H_

#include <stdexcept>
#include <string>

namespace qdb {

// A caller supplied a value outside an operation's documented domain.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// A tail bound was requested outside the regime where it is meaningful,
// e.g. an upper-tail Chernoff bound with tau <= n*p.
class RegimeError : public std::domain_error {
 public:
  explicit RegimeError(const std::string& what) : std::domain_error(what) {}
};

// A party tried to emit a message earlier than its causal past allows.
class CausalityError : public std::logic_error {
 public:
  explicit CausalityError(const std::string& what) : std::logic_error(what) {}
};

// A protocol transcript or experiment broke one of its own invariants.
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what)
      : std::logic_error(what) {}
};

}  // namespace qdb

#endif  // QDB_ERRORS_H_
