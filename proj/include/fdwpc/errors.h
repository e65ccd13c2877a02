// Copyright 2026 The fdwpc Authors
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

namespace fdwpc {

// Raised for parameters that violate a type invariant.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// eta * (g1_mean^2 + alpha1) >= 1: the EHU would recycle at least as much
// energy as it radiates.
class RecycleOutOfRange : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

// Argument outside the domain of a special function or closed form.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace fdwpc
