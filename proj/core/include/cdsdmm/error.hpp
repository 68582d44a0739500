// Copyright 2026 The cdsdmm Authors
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

namespace cdsdmm {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree with the operator they are applied to.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter is outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A v3 strategy was requested that the measurement operator cannot support.
class StrategyError : public Error {
 public:
  using Error::Error;
};

/// A computation produced a non-finite value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// File could not be read, written or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cdsdmm
