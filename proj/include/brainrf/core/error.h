#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace brainrf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied data that violates an operation's preconditions.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Object used in a state where the operation is undefined (e.g. untrained model).
class StateError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class SynthesisError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A metric was requested on data for which it has no definition (e.g. AUC on one class).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

/// Dataset cross-reference violations; the message lists every offending id.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace brainrf
