#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace daogini {

// Base class for every error this library raises on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text (CSV/JSON fields, decimal strings, addresses).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Structurally valid input that violates a documented invariant
// (unsorted snapshot, duplicate address, mismatched totals, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Bad configuration: flags, targets, manifests, model specs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Distribution cannot be measured (zero total) or split (too few wallets).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Transport-level failure talking to an explorer (retryable class).
class NetworkError : public Error {
 public:
  using Error::Error;
};

// Non-retryable explorer failure: HTTP status, error payload, bad body.
class ExplorerError : public Error {
 public:
  using Error::Error;
};

// A holder page repeated an address already seen on an earlier page.
class PaginationError : public Error {
 public:
  using Error::Error;
};

// Column transform failed for a specific row.
class TransformError : public Error {
 public:
  TransformError(const std::string& msg, std::size_t row) : Error(msg), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// Design matrix is rank deficient; carries names of the collinear columns.
class RankError : public Error {
 public:
  RankError(const std::string& msg, std::vector<std::string> columns)
      : Error(msg), columns_(std::move(columns)) {}
  const std::vector<std::string>& columns() const { return columns_; }

 private:
  std::vector<std::string> columns_;
};

}  // namespace daogini
