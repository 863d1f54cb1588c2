// Copyright 2026 The pdfl Authors
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

#ifndef PDFL_ERRORS_H_
#define PDFL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace pdfl {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid dimensions, parameter ranges or experiment settings.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed on-disk data (IDX files, history records, PoD documents).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Mathematical preconditions such as a non-positive sigma or alpha <= 1.
class DomainError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Distance metric undefined for the given inputs (zero vector under cosine).
class MetricError : public Error {
 public:
  using Error::Error;
};

class ClusteringError : public Error {
 public:
  using Error::Error;
};

class PartitionError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

// Stored snapshot missing or its digest does not match.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Raised by ClientUpdate when a client holds no data; the orchestrator skips it.
class ClientSkipped : public Error {
 public:
  using Error::Error;
};

// Training cannot continue, e.g. every client has been unlearned.
class TrainingAborted : public Error {
 public:
  using Error::Error;
};

}  // namespace pdfl

#endif  // PDFL_ERRORS_H_
