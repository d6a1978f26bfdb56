#pragma once

#include <stdexcept>
#include <string>

namespace adprompt {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed CHAT input, alignment file, manifest, or config file.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A `[x n]` repetition code that cannot be expanded.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

// Input violates a documented precondition or invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Transcript words and alignment words disagree.
class AlignmentMismatchError : public Error {
 public:
  using Error::Error;
};

// Backend or prompt configuration cannot be used.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Non-finite scores or a diverging loss.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace adprompt
