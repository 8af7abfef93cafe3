// Copyright 2026 The qmeas Authors
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

#ifndef QMEAS_ERRORS_HPP
#define QMEAS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qmeas {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A state vector or lattice wavefunction failed its normalization invariant.
class NotNormalized : public Error {
 public:
  using Error::Error;
};

/// A matrix failed the Hermitian / unitary / density-matrix invariant it was
/// asserted to satisfy.
class InvalidOperator : public Error {
 public:
  using Error::Error;
};

class BasisNotOrthonormal : public Error {
 public:
  using Error::Error;
};

class NullState : public Error {
 public:
  using Error::Error;
};

class UnresolvableWidth : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class SupportViolation : public Error {
 public:
  using Error::Error;
};

class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

class SpecInvalid : public Error {
 public:
  using Error::Error;
};

/// Cross-sector orthonormality of the transfer family does not hold, so no
/// unitary extension of the premeasurement map exists.
class MeasurementConditionViolated : public SpecInvalid {
 public:
  using SpecInvalid::SpecInvalid;
};

class CompletionFailure : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Field-level configuration error. `key_path()` names the offending key,
/// e.g. "grid.n_points".
class ValidationError : public Error {
 public:
  ValidationError(std::string key_path, const std::string& message)
      : Error(key_path + ": " + message), key_path_(std::move(key_path)) {}

  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qmeas

#endif  // QMEAS_ERRORS_HPP
