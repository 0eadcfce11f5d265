#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace intentbench {

/// Category of a failure; the CLI maps Io to exit code 2 and everything else to 1.
enum class ErrorKind { Io, Parse, Validation, Argument, Degenerate, Numeric };

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Io: return "io error";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Argument: return "argument error";
    case ErrorKind::Degenerate: return "degenerate input";
    case ErrorKind::Numeric: return "numeric error";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Same kind, message prefixed with `context: `.
  Error with_context(std::string_view context) const {
    return Error(kind_, std::string(context) + ": " + what());
  }

 private:
  ErrorKind kind_;
};

}  // namespace intentbench
