/* Copyright 2026 The btaforest Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

#include <stdexcept>
#include <string>

namespace bta {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (LibSVM lines, labels).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A caller passed an argument outside the operation's precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A class exists in the label dictionary but has no samples.
class DegenerateClassError : public Error {
 public:
  using Error::Error;
};

/// Model and data disagree (e.g. class count mismatch at evaluation time).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Model file could not be loaded: malformed section or invariant violation.
class LoadError : public Error {
 public:
  using Error::Error;
};

class VersionError : public LoadError {
 public:
  using LoadError::LoadError;
};

}  // namespace bta
