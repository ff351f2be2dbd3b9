#pragma once

#include <stdexcept>
#include <string>

namespace selfprompt {

// Base for every error raised by the library. The CLI maps all of these to
// exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input does not follow the expected file/schema layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

// File layout is recognized but the payload is damaged or truncated.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

// A value violates a documented invariant or precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An index or parameter lies outside its allowed range.
class RangeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Input too large for a quadratic-cost routine.
class SizeError : public Error {
 public:
  using Error::Error;
};

[[noreturn]] void throw_validation(const std::string& what);

}  // namespace selfprompt
