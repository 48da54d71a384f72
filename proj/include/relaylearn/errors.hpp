// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relaylearn {

// Argument outside the mathematical domain of an operation (negative sigma,
// non-positive distance, NaN path loss).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid configuration or usage: bad preset name, invalid split fraction,
// inconsistent scenario bounds.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Data does not satisfy a contract: empty dataset, single-class labels where
// two are required, schema or dimension mismatch.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed CSV input. `row()` is the 1-based line number in the file
// (the header is line 1), 0 when the file as a whole is at fault.
class ParseError : public DataError {
 public:
  ParseError(std::size_t row, const std::string& what)
      : DataError(row == 0 ? what : "row " + std::to_string(row) + ": " + what),
        row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace relaylearn
