// Copyright 2026 The mibound Authors
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

#include <stdexcept>
#include <string>

namespace mibound {

// Malformed input: wrong lengths, invalid shapes, violated preconditions.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameter outside the mathematical domain of an operation (z <= 0, eta > 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Non-finite values, divergent integrands, failed convergence.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested construction exceeds a configured size budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mibound
