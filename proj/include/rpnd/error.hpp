#ifndef RPND_ERROR_HPP
#define RPND_ERROR_HPP

#include <cstddef>
#include <exception>
#include <string>
#include <string_view>

namespace rpnd {

// Root of every error thrown by the library. Context can be prepended while
// an exception unwinds (e.g. the class subset of the failing tree node, or
// the CV repeat/fold) without losing the dynamic type.
class Error : public std::exception {
 public:
  explicit Error(std::string message) : message_(std::move(message)) {}

  const char* what() const noexcept override { return message_.c_str(); }

  void add_context(std::string_view context) {
    message_ = std::string(context) + ": " + message_;
  }

 private:
  std::string message_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnsupportedFeature : public Error {
 public:
  using Error::Error;
};

class MissingValue : public SyntaxError {
 public:
  explicit MissingValue(std::size_t line)
      : SyntaxError(line, "missing value '?' is not supported") {}
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidK : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DegenerateWeights : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class SingleClass : public Error {
 public:
  using Error::Error;
};

class EncodingMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyClass : public Error {
 public:
  using Error::Error;
};

class AllMembersRejected : public Error {
 public:
  using Error::Error;
};

class MismatchedPlans : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, const std::string& reason)
      : Error(line == 0 ? reason : "config line " + std::to_string(line) + ": " + reason),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rpnd

#endif  // RPND_ERROR_HPP
