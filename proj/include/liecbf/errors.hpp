// Copyright 2026 The liecbf Authors
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

#ifndef LIECBF__ERRORS_HPP_
#define LIECBF__ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace liecbf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix handed to the rotation constructors is not (close to) SO(3).
class DegenerateRotationError : public Error {
 public:
  using Error::Error;
};

/// The integrator produced a NaN or Inf.
class NonFiniteStateError : public Error {
 public:
  using Error::Error;
};

/// The disk support function s(R) is not differentiable at the queried
/// attitude (disk normal parallel to the slit normal).
class SupportSingularityError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters passed to a constructor or operation.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written. The message names the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace liecbf

#endif  // LIECBF__ERRORS_HPP_
