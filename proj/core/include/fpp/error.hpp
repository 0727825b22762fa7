// Copyright 2026 The fpplab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace fpp {

/// Base class for every error raised by the library. Argument validation
/// failures use std::invalid_argument directly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The geodesic between two vertices is not unique but the caller
/// requested a quantity that is only defined for a unique optimal path.
class NonUniqueGeodesic : public Error {
 public:
  using Error::Error;
};

/// The requested target was never settled by the shortest-path search.
class UnreachableTarget : public Error {
 public:
  using Error::Error;
};

/// A scaled exact-mode weight does not fit the integer grid.
class GridOverflow : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling exhausted its retry budget.
class RetryBudgetExhausted : public Error {
 public:
  using Error::Error;
};

/// A pair or region is too close to the box boundary for the requested
/// certificate to be insensitive to box truncation.
class InteriorityViolation : public Error {
 public:
  using Error::Error;
};

/// A configuration document failed validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fpp
