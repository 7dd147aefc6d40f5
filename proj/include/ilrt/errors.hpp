// Copyright 2026 The ilrt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ILRT_ERRORS_HPP_
#define ILRT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ilrt {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input text does not parse under the declared format.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A decoded value does not fit the declared record length.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside an operation's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed a configured capacity guard.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// No index satisfies the quantile condition.
class NoQuantileError : public Error {
 public:
  using Error::Error;
};

/// A place-selection rule selected nothing, so no frequency exists.
class EmptyExtractionError : public Error {
 public:
  using Error::Error;
};

}  // namespace ilrt

#endif  // ILRT_ERRORS_HPP_
