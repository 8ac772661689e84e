/*
 * Copyright 2026 The damp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace damp {

// Every library failure derives from Error so the CLI can map it to an
// exit code in one place.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class LayoutError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Thrown by div_svt when two active singular values coincide.
class DegenerateSpectrumError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, double requested, double budget)
      : Error(what), requested_(requested), budget_(budget) {}
  double requested() const { return requested_; }
  double budget() const { return budget_; }

 private:
  double requested_;
  double budget_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace damp
