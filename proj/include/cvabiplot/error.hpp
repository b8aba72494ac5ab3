#pragma once

#include <stdexcept>
#include <string>

namespace cvab {

/// Error categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
  Config,   ///< bad input shape, bad option, unusable dataset
  Numeric,  ///< singular scatter, rank failure, internal consistency
  Io,       ///< file system problems
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

/// Raised when the within-group scatter cannot be inverted. Callers on the
/// eigenproblem route should switch to the GSVD route.
class SingularScatterError : public NumericError {
 public:
  explicit SingularScatterError(const std::string& detail = {})
      : NumericError(detail.empty() ? std::string(kMessage) : std::string(kMessage) + " (" + detail + ")") {}

  static constexpr const char* kMessage = "singular scatter: use gsvd path";
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace cvab
