#pragma once

#include <stdexcept>
#include <string>

namespace ppmwords {

enum class ErrorKind {
  InvalidInput,      // malformed text, symbol out of range, bad record line
  InvalidParameter,  // parameter outside its domain (alpha <= 1, D < 2, ...)
  InsufficientData,  // estimator has too few usable points
  Io,                // unreadable or unwritable file
  Format,            // schema/version mismatch in persisted files
  Numeric,           // non-finite intermediate result
};

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

}  // namespace ppmwords
