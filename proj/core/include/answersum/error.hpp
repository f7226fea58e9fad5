#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace answersum {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed something that violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed input stream. Offset is the byte position reported by the parser.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::uint64_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

// A document parsed but violates the schema or a domain invariant.
// entry_index is -1 when the error is not tied to one entry.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& what, long entry_index = -1)
      : Error(what), entry_index_(entry_index) {}

  long entry_index() const noexcept { return entry_index_; }

 private:
  long entry_index_;
};

// The remote scorer could not be reached. Safe to retry.
class TransportError : public Error {
 public:
  using Error::Error;
  bool retryable() const noexcept { return true; }
};

// The remote scorer answered with something the wire protocol does not allow.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace answersum
