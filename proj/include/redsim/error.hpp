#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace redsim {

enum class ErrorCode {
  BadSpec,
  InvalidArgument,
  Parse,
  Validation,
  NonFiniteModulus,
  ZeroTotalModulus,
  StepTooLarge,
  IncomparableStats,
  Io,
};

// Base of every exception thrown by the simulator core. The C API maps
// code() onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : Error(ErrorCode::Parse, "line " + std::to_string(line) + ", column " +
                                    std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace redsim
