#pragma once

#include <stdexcept>
#include <string>

namespace umt {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument is outside its documented range.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// An atom was passed to a map that is not defined on it.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An exhaustive search would exceed its enumeration budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class GraphError : public Error {
 public:
  using Error::Error;
};

class ConditioningError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// An internal invariant (e.g. monotone objective) was violated.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// A file does not match its schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace umt
