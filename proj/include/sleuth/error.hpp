#pragma once

#include <stdexcept>
#include <string>

namespace sleuth {

// Base for failures raised while loading or validating inputs.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file contents; the message names the file and line.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a data invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Filesystem failure; the message carries the path and OS reason.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sleuth
