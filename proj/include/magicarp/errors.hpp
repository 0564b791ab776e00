/* Copyright 2026 The MAGICARP Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace magicarp {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Input that fails a structural check (non-unitary target, non-traceless
// control, bad config value, malformed file).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// Raised by the time-optimal construction when the projected control vector
// vanishes and its direction is undefined.
class DegenerateEnvelope : public Error {
 public:
  DegenerateEnvelope(const std::string& what, int step) : Error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// A finite-difference probe produced a non-finite objective.
class GradientError : public Error {
 public:
  GradientError(const std::string& what, std::vector<double> probe)
      : Error(what), probe_(std::move(probe)) {}
  const std::vector<double>& probe() const { return probe_; }

 private:
  std::vector<double> probe_;
};

}  // namespace magicarp
