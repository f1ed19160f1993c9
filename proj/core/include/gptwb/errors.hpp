#pragma once

#include <stdexcept>
#include <string>

namespace gptwb {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The requested operation is outside the supported (desk-scale) envelope.
class Unsupported : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class UnboundedObjective : public Error {
 public:
  using Error::Error;
};

/// Malformed input document (JSON/CSV/space literal).
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace gptwb
