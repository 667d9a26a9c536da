// Copyright 2026 The mqc Authors
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

namespace mqc {

/// Base class for every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied data that violates a documented precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Unknown label, label collision, or dimension mismatch between layouts.
class LayoutError : public InputError {
 public:
  using InputError::InputError;
};

/// A dense object would exceed the configured dimension guard.
class DimensionGuardError : public InputError {
 public:
  using InputError::InputError;
};

/// Receiver structure not supported by a transformation.
class UnsupportedTopology : public InputError {
 public:
  using InputError::InputError;
};

/// A constructed object failed its post-hoc verification.
class VerificationError : public Error {
 public:
  using Error::Error;
};

/// Feature declared by the data model but not implemented.
class NotImplemented : public Error {
 public:
  using Error::Error;
};

}  // namespace mqc
