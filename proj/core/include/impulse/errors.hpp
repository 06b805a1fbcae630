// Copyright 2026 The impulse authors.
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

#ifndef IMPULSE_ERRORS_H
#define IMPULSE_ERRORS_H

#include <stdexcept>
#include <string>

namespace impulse {

/// A point fell outside the domain of a map by more than the clamping tolerance.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an operation needs exact interval images or preimages and the
/// map (or map sequence) cannot provide them.
class UnsupportedMap : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A reversed-chain quantity was requested at a state with zero stationary weight.
class UndefinedState : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input rejected by a constructor or an operation precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace impulse

#endif  // IMPULSE_ERRORS_H
