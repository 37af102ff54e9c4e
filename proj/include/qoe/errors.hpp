#pragma once

#include <stdexcept>
#include <string>

namespace qoe {

/// Rejected input parameter (out of range, wrong sign, inconsistent fields).
class ParamError : public std::invalid_argument {
 public:
  explicit ParamError(const std::string& what) : std::invalid_argument(what) {}
};

/// The session can never finish under the given bandwidth trace.
class UnfinishableSession : public std::runtime_error {
 public:
  explicit UnfinishableSession(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed text record (bad JSON, unknown or missing fields, bad CSV).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Report store could not be opened, read back, or appended to.
class StoreError : public std::runtime_error {
 public:
  explicit StoreError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qoe
