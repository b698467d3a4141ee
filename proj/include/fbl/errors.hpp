#pragma once

#include <stdexcept>
#include <string>

namespace fbl {

// Base of every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes or dimensions of the inputs do not fit together.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A mathematical precondition failed; witness names the offending datum.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, std::string witness = {})
      : Error(witness.empty() ? what : what + " [witness: " + witness + "]"),
        witness_(std::move(witness)) {}
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

// An internal guarantee failed. Always a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Malformed external input (documents, command-line values).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace fbl
