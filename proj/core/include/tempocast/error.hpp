// Copyright 2026 The Tempocast Authors. All Rights Reserved.
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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tempocast {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data is unusable: bad schema, unparsable cells, out-of-range values,
/// gaps, or too few rows. The CLI maps this family to exit status 2.
class DataError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t row, const std::string& what)
      : DataError("row " + std::to_string(row) + ": " + what), row_(row) {}
  /// 1-based data row (the header is row 0).
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class ValidationError : public DataError {
 public:
  ValidationError(std::string column, std::size_t row, double value,
                  const std::string& rule)
      : DataError("row " + std::to_string(row) + ": " + column + "=" +
                  std::to_string(value) + " violates " + rule),
        column_(std::move(column)),
        row_(row),
        value_(value) {}
  const std::string& column() const noexcept { return column_; }
  std::size_t row() const noexcept { return row_; }
  double value() const noexcept { return value_; }

 private:
  std::string column_;
  std::size_t row_;
  double value_;
};

class EmptyDataError : public DataError {
 public:
  using DataError::DataError;
};

class GapError : public DataError {
 public:
  GapError(const std::string& what, std::vector<std::int64_t> missing_hours)
      : DataError(what), missing_hours_(std::move(missing_hours)) {}
  /// Missing instants, in hours since the Unix epoch.
  const std::vector<std::int64_t>& missing_hours() const noexcept {
    return missing_hours_;
  }

 private:
  std::vector<std::int64_t> missing_hours_;
};

/// Matrix or vector dimensions do not match what an operation expects.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A configuration or call argument is outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// NaN or infinity where finite numbers are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  TrainingError(std::size_t epoch, const std::string& what)
      : Error("epoch " + std::to_string(epoch) + ": " + what), epoch_(epoch) {}
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

/// Serialized model bytes are malformed or truncated.
class FormatError : public Error {
 public:
  using Error::Error;
};

class VersionError : public FormatError {
 public:
  VersionError(std::uint16_t found, std::uint16_t expected)
      : FormatError("unsupported model format version " +
                    std::to_string(found) + " (this build reads version " +
                    std::to_string(expected) + ")"),
        found_(found),
        expected_(expected) {}
  std::uint16_t found() const noexcept { return found_; }
  std::uint16_t expected() const noexcept { return expected_; }

 private:
  std::uint16_t found_;
  std::uint16_t expected_;
};

}  // namespace tempocast
