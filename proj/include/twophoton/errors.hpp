// Copyright 2026 The lindblad-twophoton Authors
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

namespace twophoton {

// Base of every error raised by the library. Callers that only need to
// distinguish "bad input" from "numerical failure" can catch the two
// intermediate classes below.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

class SolverError : public Error {
public:
  using Error::Error;
};

class InvalidDimension : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class InvalidModel : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// The Fock cutoff cannot hold the oscillator state. `required_cutoff` is the
// smallest cutoff that would satisfy the tail bound, or 0 if unknown.
class TruncationInsufficient : public SolverError {
public:
  TruncationInsufficient(const std::string& what, int required_cutoff)
      : SolverError(what), required_cutoff_(required_cutoff) {}
  int required_cutoff() const noexcept { return required_cutoff_; }

private:
  int required_cutoff_;
};

// The two-photon parameters need a negative incoherent pump in the
// one-photon model. `deficit` is -P' > 0.
class Unmappable : public ValidationError {
public:
  Unmappable(const std::string& what, double deficit)
      : ValidationError(what), deficit_(deficit) {}
  double deficit() const noexcept { return deficit_; }

private:
  double deficit_;
};

class StepUnderflow : public SolverError {
public:
  using SolverError::SolverError;
};

class TraceDrift : public SolverError {
public:
  using SolverError::SolverError;
};

class DegenerateSteadyState : public SolverError {
public:
  using SolverError::SolverError;
};

class CapExceeded : public SolverError {
public:
  using SolverError::SolverError;
};

class NotConverged : public SolverError {
public:
  using SolverError::SolverError;
};

}  // namespace twophoton
