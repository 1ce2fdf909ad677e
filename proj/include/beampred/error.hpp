#pragma once

#include <stdexcept>
#include <string>

namespace beampred {

enum class ErrorKind {
  InvalidInput,
  InvalidConfig,
  InsufficientData,
  DegenerateRange,
  InvalidNoise,
  Internal,
};

/// Library-wide exception. The kind decides the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

/// 2 invalid config, 3 data error, 4 internal invariant violation.
inline int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidConfig:
      return 2;
    case ErrorKind::InvalidInput:
    case ErrorKind::InsufficientData:
    case ErrorKind::DegenerateRange:
    case ErrorKind::InvalidNoise:
      return 3;
    case ErrorKind::Internal:
      return 4;
  }
  return 4;
}

}  // namespace beampred
