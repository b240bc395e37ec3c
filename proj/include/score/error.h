// Copyright 2026 The score-re Authors.
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

#ifndef SCORE_ERROR_H_
#define SCORE_ERROR_H_

#include <stdexcept>
#include <string>

namespace score {

// Base class for all errors raised by the library. The CLI maps IoError to
// exit code 2 and every other Error to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed records or datasets.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Invalid hyperparameters or option combinations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Dimension mismatches between vectors, matrices and models.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Projection produced a vector too small to normalise.
class DegenerateVectorError : public Error {
 public:
  using Error::Error;
};

// Metric has no eligible terms (e.g. macro-F1 with no active class).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss or similar failure during optimisation.
class TrainingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(const std::string &path, const std::string &what)
      : Error(path + ": " + what), path_(path) {}
  const std::string &path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace score

#endif  // SCORE_ERROR_H_
