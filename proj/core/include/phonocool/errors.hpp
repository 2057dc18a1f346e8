// Copyright 2025 The phonocool Authors
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
#include <utility>
#include <vector>

namespace phonocool {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Stable identifier used in machine-readable error reports.
  virtual const char* kind() const noexcept { return "error"; }
};

class InvalidDimensionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_dimension"; }
};

class InvalidIndexError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_index"; }
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "dimension_mismatch"; }
};

class InvalidParameterError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_parameter"; }
};

class InvalidStateError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_state"; }
};

class SingularSystemError : public Error {
 public:
  SingularSystemError(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate_(condition_estimate) {}
  const char* kind() const noexcept override { return "singular_system"; }
  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

class DegenerateSteadyStateError : public Error {
 public:
  DegenerateSteadyStateError(const std::string& what, int nullity)
      : Error(what), nullity_(nullity) {}
  const char* kind() const noexcept override { return "degenerate_steady_state"; }
  int nullity() const noexcept { return nullity_; }

 private:
  int nullity_;
};

class PositivityError : public Error {
 public:
  PositivityError(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  const char* kind() const noexcept override { return "positivity"; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class StiffnessError : public Error {
 public:
  StiffnessError(const std::string& what, double time_reached)
      : Error(what), time_reached_(time_reached) {}
  const char* kind() const noexcept override { return "stiffness"; }
  double time_reached() const noexcept { return time_reached_; }

 private:
  double time_reached_;
};

/// Thrown when the steady-state phonon number does not settle before the
/// largest allowed Fock cutoff. Carries every (cutoff, value) pair tried.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, std::vector<std::pair<int, double>> sequence)
      : Error(what), sequence_(std::move(sequence)) {}
  const char* kind() const noexcept override { return "truncation"; }
  const std::vector<std::pair<int, double>>& sequence() const noexcept { return sequence_; }

 private:
  std::vector<std::pair<int, double>> sequence_;
};

class FitError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "fit"; }
};

}  // namespace phonocool
