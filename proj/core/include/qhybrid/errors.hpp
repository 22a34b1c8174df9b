// Copyright 2026 The qhybrid Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Exception hierarchy shared by every qhybrid module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace qhybrid {

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Register size outside the supported range.
class SizeError : public Error {
  public:
    using Error::Error;
};

/// Qubit, basis-state or parameter index out of range.
class IndexError : public Error {
  public:
    using Error::Error;
};

/// Structurally invalid argument (equal qubit pair, bad token, ...).
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// Shapes that do not chain.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Parameter-shift requested for a parameter that has no shift form.
class UnsupportedShiftError : public Error {
  public:
    using Error::Error;
};

/// Non-finite loss or gradient during optimisation.
class TrainingError : public Error {
  public:
    using Error::Error;
};

/// Malformed or truncated data file.
class DataError : public Error {
  public:
    using Error::Error;
};

/// Invalid configuration document. The message carries the key path.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Filesystem failure while persisting or reading results.
class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace qhybrid
