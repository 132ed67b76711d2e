#ifndef RETROAI_ERROR_HPP
#define RETROAI_ERROR_HPP

#include <stdexcept>
#include <string>

namespace retroai {

// Base of every error the library throws. The concrete type is the error
// category; service and CLI map categories onto status and exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

class VersionConflictError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold (e.g. planning a
// cyclic backlog).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Instance exceeds an enumeration bound.
class SizeError : public Error {
 public:
  using Error::Error;
};

// A loaded value breaks a structural invariant of the domain model.
class InvariantError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : Error(what), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Report provider failed or timed out.
class ProviderError : public Error {
 public:
  using Error::Error;
};

}  // namespace retroai

#endif  // RETROAI_ERROR_HPP
